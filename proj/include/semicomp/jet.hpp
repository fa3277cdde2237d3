#ifndef SEMICOMP_JET_HPP
#define SEMICOMP_JET_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace semicomp {

/// Truncated multivariate Taylor polynomials in three variables, total degree <= 4.
///
/// A Jet stores the Taylor coefficients of a smooth function f(x0 + h) around x0,
/// truncated after total degree four. Arithmetic on jets propagates all mixed
/// partial derivatives exactly (up to rounding), so any closed-form expression
/// written generically in its scalar type yields its full derivative table when
/// evaluated on jets.
namespace jet_detail {

inline constexpr int kOrder = 4;
inline constexpr int kSize = 35;      // monomials u^a v^b w^c with a+b+c <= 4
inline constexpr int kProducts = 210;  // monomial pairs whose product stays within degree 4

struct Monomial {
  int a, b, c;
  constexpr int degree() const { return a + b + c; }
};

constexpr std::array<Monomial, kSize> make_monomials() {
  std::array<Monomial, kSize> out{};
  int k = 0;
  for (int d = 0; d <= kOrder; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) out[k++] = Monomial{a, b, d - a - b};
  return out;
}

inline constexpr std::array<Monomial, kSize> kMonomials = make_monomials();

constexpr int index_of(int a, int b, int c) {
  for (int k = 0; k < kSize; ++k)
    if (kMonomials[k].a == a && kMonomials[k].b == b && kMonomials[k].c == c) return k;
  return -1;
}

constexpr std::array<std::array<std::array<int, kOrder + 1>, kOrder + 1>, kOrder + 1> make_index() {
  std::array<std::array<std::array<int, kOrder + 1>, kOrder + 1>, kOrder + 1> out{};
  for (int a = 0; a <= kOrder; ++a)
    for (int b = 0; b <= kOrder; ++b)
      for (int c = 0; c <= kOrder; ++c) out[a][b][c] = index_of(a, b, c);
  return out;
}

inline constexpr auto kIndex = make_index();

struct Product {
  std::uint8_t lhs, rhs, out;
};

constexpr std::array<Product, kProducts> make_products() {
  std::array<Product, kProducts> out{};
  int k = 0;
  for (int i = 0; i < kSize; ++i)
    for (int j = 0; j < kSize; ++j) {
      const Monomial& x = kMonomials[i];
      const Monomial& y = kMonomials[j];
      if (x.degree() + y.degree() > kOrder) continue;
      out[k++] = Product{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                         static_cast<std::uint8_t>(index_of(x.a + y.a, x.b + y.b, x.c + y.c))};
    }
  return out;
}

inline constexpr std::array<Product, kProducts> kProductTable = make_products();

constexpr double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

}  // namespace jet_detail

template <typename Scalar>
class Jet {
 public:
  using Coefficients = std::array<Scalar, jet_detail::kSize>;

  Jet() { c_.fill(Scalar(0)); }
  Jet(Scalar value) {  // NOLINT(google-explicit-constructor): constants mix freely
    c_.fill(Scalar(0));
    c_[0] = value;
  }

  /// Independent variable number `var` (0, 1 or 2) expanded around `value`.
  static Jet variable(Scalar value, int var) {
    Jet j(value);
    j.c_[1 + var] = Scalar(1);
    return j;
  }

  Scalar value() const { return c_[0]; }
  Scalar coefficient(int a, int b, int c) const { return c_[jet_detail::kIndex[a][b][c]]; }
  /// Mixed partial derivative d^{a+b+c} f / du^a dv^b dw^c at the expansion point.
  Scalar partial(int a, int b, int c) const {
    return coefficient(a, b, c) * jet_detail::factorial(a) * jet_detail::factorial(b) *
           jet_detail::factorial(c);
  }
  const Coefficients& coefficients() const { return c_; }
  Coefficients& coefficients() { return c_; }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < jet_detail::kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < jet_detail::kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(Scalar s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator+=(Scalar s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet out;
    for (const auto& p : jet_detail::kProductTable) out.c_[p.out] += x.c_[p.lhs] * y.c_[p.rhs];
    return out;
  }

  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator-(Jet x) { return x *= Scalar(-1); }
  friend Jet operator*(Jet x, Scalar s) { return x *= s; }
  friend Jet operator*(Scalar s, Jet x) { return x *= s; }
  friend Jet operator+(Jet x, Scalar s) { return x += s; }
  friend Jet operator+(Scalar s, Jet x) { return x += s; }
  friend Jet operator-(Jet x, Scalar s) { return x += -s; }
  friend Jet operator-(Scalar s, Jet x) { return (x *= Scalar(-1)) += s; }
  friend Jet operator/(Jet x, Scalar s) { return x *= Scalar(1) / s; }

 private:
  Coefficients c_;
};

/// f(x) for a univariate f given its derivatives f, f', ..., f'''' at x.value().
template <typename Scalar>
Jet<Scalar> compose(const Jet<Scalar>& x, const std::array<Scalar, 5>& d) {
  Jet<Scalar> h = x;
  h.coefficients()[0] = Scalar(0);
  Jet<Scalar> r(d[4] / Scalar(24));
  r = r * h + d[3] / Scalar(6);
  r = r * h + d[2] / Scalar(2);
  r = r * h + d[1];
  r = r * h + d[0];
  return r;
}

template <typename Scalar>
Jet<Scalar> exp(const Jet<Scalar>& x) {
  const Scalar e = std::exp(x.value());
  return compose(x, {e, e, e, e, e});
}

template <typename Scalar>
Jet<Scalar> expm1(const Jet<Scalar>& x) {
  const Scalar e = std::exp(x.value());
  return compose(x, {std::expm1(x.value()), e, e, e, e});
}

template <typename Scalar>
Jet<Scalar> log(const Jet<Scalar>& x) {
  const Scalar r = Scalar(1) / x.value();
  return compose(x, {std::log(x.value()), r, -r * r, 2 * r * r * r, -6 * r * r * r * r});
}

template <typename Scalar>
Jet<Scalar> log1p(const Jet<Scalar>& x) {
  const Scalar r = Scalar(1) / (Scalar(1) + x.value());
  return compose(x, {std::log1p(x.value()), r, -r * r, 2 * r * r * r, -6 * r * r * r * r});
}

template <typename Scalar>
Jet<Scalar> reciprocal(const Jet<Scalar>& x) {
  const Scalar r = Scalar(1) / x.value();
  const Scalar r2 = r * r;
  return compose(x, {r, -r2, 2 * r2 * r, -6 * r2 * r2, 24 * r2 * r2 * r});
}

template <typename Scalar>
Jet<Scalar> operator/(const Jet<Scalar>& x, const Jet<Scalar>& y) {
  return x * reciprocal(y);
}

template <typename Scalar>
Jet<Scalar> operator/(Scalar s, const Jet<Scalar>& y) {
  return reciprocal(y) * s;
}

template <typename Scalar>
Jet<Scalar> sqrt(const Jet<Scalar>& x) {
  const Scalar s = std::sqrt(x.value());
  const Scalar r = Scalar(1) / x.value();
  return compose(x, {s, Scalar(0.5) * s * r, Scalar(-0.25) * s * r * r,
                     Scalar(0.375) * s * r * r * r, Scalar(-0.9375) * s * r * r * r * r});
}

}  // namespace semicomp

#endif  // SEMICOMP_JET_HPP
