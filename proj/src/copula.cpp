#include "semicomp/copula.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "semicomp/errors.hpp"

namespace semicomp {

namespace {

using JetD = Jet<double>;

double value_of(double x) { return x; }
double value_of(const JetD& x) { return x.value(); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_quantile(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

JetD normal_cdf(const JetD& x) {
  const double x0 = x.value();
  const double f = normal_pdf(x0);
  return compose(x, {normal_cdf(x0), f, -x0 * f, (x0 * x0 - 1.0) * f, (3.0 * x0 - x0 * x0 * x0) * f});
}

JetD normal_quantile(const JetD& p) {
  const double x0 = normal_quantile(p.value());
  const double r = 1.0 / normal_pdf(x0);
  const double r2 = r * r;
  return compose(p, {x0, r, x0 * r2, (1.0 + 2.0 * x0 * x0) * r2 * r,
                     x0 * (7.0 + 6.0 * x0 * x0) * r2 * r2});
}

// Closed forms written once for double and jets. Exponent sums go through a
// log-sum-exp so large alpha with small u does not overflow.
template <typename T>
T clayton_cdf(const T& u, const T& v, const T& a) {
  using std::exp;
  using std::log;
  const T x = -a * log(u);
  const T y = -a * log(v);
  const T m = value_of(x) >= value_of(y) ? x : y;
  const T log_s = m + log(exp(x - m) + exp(y - m) - exp(-m));
  return exp(-(log_s / a));
}

template <typename T>
T gumbel_cdf(const T& u, const T& v, const T& a) {
  using std::exp;
  using std::log;
  const T x = a * log(-log(u));
  const T y = a * log(-log(v));
  const T m = value_of(x) >= value_of(y) ? x : y;
  const T log_s = m + log(exp(x - m) + exp(y - m));
  return exp(-exp(log_s / a));
}

template <typename T>
T frank_cdf(const T& u, const T& v, const T& a) {
  using std::expm1;
  using std::log1p;
  return -(log1p(expm1(-a * u) * expm1(-a * v) / expm1(-a)) / a);
}

double bivariate_normal_cdf(double x, double y, double rho) {
  // Plackett's identity in the arcsine parametrisation:
  // Phi2(x, y; rho) = Phi(x) Phi(y) + (2 pi)^-1 int_0^{asin rho} exp(-(x^2+y^2-2xy sin t)/(2 cos^2 t)) dt
  const double upper = std::asin(rho);
  auto integrand = [x, y](double t) {
    const double s = std::sin(t);
    const double c2 = 1.0 - s * s;
    return std::exp(-(x * x + y * y - 2.0 * x * y * s) / (2.0 * c2));
  };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 8, 1e-13, &err);
  return normal_cdf(x) * normal_cdf(y) + integral / (2.0 * std::numbers::pi);
}

double gaussian_cdf(double u, double v, double rho) {
  return bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), rho);
}

void check_unit(double u, const char* name) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError(std::string(name) + " outside [0, 1]");
}

double clamp_u(double u) { return std::clamp(u, kUClamp, 1.0 - kUClamp); }

CopulaDerivatives gaussian_derivatives(double u, double v, double rho) {
  const JetD U = JetD::variable(u, 0);
  const JetD V = JetD::variable(v, 1);
  const JetD R = JetD::variable(rho, 2);
  const JetD x = normal_quantile(U);
  const JetD y = normal_quantile(V);
  const JetD s2 = 1.0 - R * R;
  const JetD s = sqrt(s2);
  const JetD cu = normal_cdf((y - R * x) / s);
  const JetD cv = normal_cdf((x - R * y) / s);
  const JetD cr =
      exp(-((x * x - 2.0 * (R * x * y) + y * y) / (2.0 * s2))) / (2.0 * std::numbers::pi * s);

  CopulaDerivatives d;
  for (const auto& m : jet_detail::kMonomials) {
    double value;
    if (m.a >= 1)
      value = cu.partial(m.a - 1, m.b, m.c);
    else if (m.b >= 1)
      value = cv.partial(0, m.b - 1, m.c);
    else if (m.c >= 1)
      value = cr.partial(0, 0, m.c - 1);
    else
      value = gaussian_cdf(u, v, rho);
    d(m.a, m.b, m.c) = value;
  }
  return d;
}

// Copula densities in double for the sampler's Newton polish.
double frank_density(double u, double v, double a) {
  const double em = -std::expm1(-a);
  const double den = em - (-std::expm1(-a * u)) * (-std::expm1(-a * v));
  return a * em * std::exp(-a * (u + v)) / (den * den);
}

double gumbel_density(double u, double v, double a) {
  const double wu = -std::log(u);
  const double wv = -std::log(v);
  const double x = a * std::log(wu);
  const double y = a * std::log(wv);
  const double m = std::max(x, y);
  const double log_s = m + std::log(std::exp(x - m) + std::exp(y - m));
  const double root = std::exp(log_s / a);
  return std::exp(-root + (a - 1.0) * std::log(wu * wv) + (1.0 / a - 2.0) * log_s) / (u * v) *
         (root + a - 1.0);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::Clayton: return "clayton";
    case Family::Frank: return "frank";
    case Family::Gumbel: return "gumbel";
    case Family::Gaussian: return "gaussian";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  const std::string s = lower(name);
  if (s == "clayton") return Family::Clayton;
  if (s == "frank") return Family::Frank;
  if (s == "gumbel") return Family::Gumbel;
  if (s == "gaussian" || s == "normal") return Family::Gaussian;
  throw DomainError("unknown copula family '" + std::string(name) + "'");
}

bool in_domain(Family family, double alpha) {
  if (!std::isfinite(alpha)) return false;
  switch (family) {
    case Family::Clayton: return alpha > 0.0;
    case Family::Frank: return alpha != 0.0;
    case Family::Gumbel: return alpha >= 1.0;
    case Family::Gaussian: return alpha > -1.0 && alpha < 1.0;
  }
  return false;
}

void check_domain(Family family, double alpha) {
  if (!in_domain(family, alpha))
    throw DomainError(family_name(family) + " copula parameter " + std::to_string(alpha) +
                      " outside its domain");
}

const std::array<DerivIndex, 24>& supported_indices() {
  static const std::array<DerivIndex, 24> kIndices = {{
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0}, {0, 2, 0}, {1, 1, 0},
      {1, 0, 1}, {0, 1, 1}, {0, 0, 2}, {2, 1, 0}, {1, 2, 0}, {3, 0, 0},
      {0, 3, 0}, {2, 0, 1}, {0, 2, 1}, {1, 1, 1}, {1, 0, 2}, {0, 1, 2},
      {1, 1, 2}, {2, 1, 1}, {1, 2, 1}, {3, 1, 0}, {1, 3, 0}, {2, 2, 0},
  }};
  return kIndices;
}

bool is_supported(const DerivIndex& idx) {
  const auto& all = supported_indices();
  return std::find(all.begin(), all.end(), idx) != all.end();
}

double copula_cdf(Family family, double u_t, double u_d, double alpha) {
  check_domain(family, alpha);
  check_unit(u_t, "u_T");
  check_unit(u_d, "u_D");
  if (u_t == 0.0 || u_d == 0.0) return 0.0;
  if (u_t == 1.0) return u_d;
  if (u_d == 1.0) return u_t;
  switch (family) {
    case Family::Clayton: return clayton_cdf(u_t, u_d, alpha);
    case Family::Frank: return frank_cdf(u_t, u_d, alpha);
    case Family::Gumbel: return gumbel_cdf(u_t, u_d, alpha);
    case Family::Gaussian: return gaussian_cdf(u_t, u_d, alpha);
  }
  return 0.0;
}

CopulaDerivatives copula_derivatives(Family family, double u_t, double u_d, double alpha) {
  check_domain(family, alpha);
  const double u = clamp_u(u_t);
  const double v = clamp_u(u_d);
  if (family == Family::Gaussian) return gaussian_derivatives(u, v, alpha);

  const JetD U = JetD::variable(u, 0);
  const JetD V = JetD::variable(v, 1);
  const JetD A = JetD::variable(alpha, 2);
  JetD c;
  switch (family) {
    case Family::Clayton: c = clayton_cdf(U, V, A); break;
    case Family::Frank: c = frank_cdf(U, V, A); break;
    case Family::Gumbel: c = gumbel_cdf(U, V, A); break;
    case Family::Gaussian: break;
  }
  CopulaDerivatives d;
  for (const auto& m : jet_detail::kMonomials) d(m.a, m.b, m.c) = c.partial(m.a, m.b, m.c);
  return d;
}

double copula_partial(Family family, DerivIndex idx, double u_t, double u_d, double alpha) {
  if (!is_supported(idx))
    throw UnsupportedIndexError("unsupported derivative index (" + std::to_string(idx.du) + "," +
                                std::to_string(idx.dv) + "," + std::to_string(idx.dalpha) + ")");
  check_unit(u_t, "u_T");
  check_unit(u_d, "u_D");
  return copula_derivatives(family, u_t, u_d, alpha)(idx.du, idx.dv, idx.dalpha);
}

double conditional_cdf(Family family, double alpha, double u_t, double u_d) {
  check_domain(family, alpha);
  if (!(u_t > 0.0 && u_t < 1.0)) throw DomainError("u_T must lie strictly inside (0, 1)");
  check_unit(u_d, "u_D");
  if (u_d == 0.0) return 0.0;
  if (u_d == 1.0) return 1.0;
  const double u = u_t;
  const double v = u_d;
  switch (family) {
    case Family::Clayton: {
      const double x = -alpha * std::log(u);
      const double y = -alpha * std::log(v);
      const double m = std::max(x, y);
      const double log_s = m + std::log(std::exp(x - m) + std::exp(y - m) - std::exp(-m));
      return std::exp((-alpha - 1.0) * std::log(u) + (-1.0 / alpha - 1.0) * log_s);
    }
    case Family::Gumbel: {
      const double wu = -std::log(u);
      const double x = alpha * std::log(wu);
      const double y = alpha * std::log(-std::log(v));
      const double m = std::max(x, y);
      const double log_s = m + std::log(std::exp(x - m) + std::exp(y - m));
      const double c = std::exp(-std::exp(log_s / alpha));
      return c * std::exp((1.0 / alpha - 1.0) * log_s + (alpha - 1.0) * std::log(wu)) / u;
    }
    case Family::Frank: {
      const double eu = std::expm1(-alpha * u);
      const double ev = std::expm1(-alpha * v);
      return std::exp(-alpha * u) * ev / (std::expm1(-alpha) + eu * ev);
    }
    case Family::Gaussian: {
      const double x = normal_quantile(u);
      const double y = normal_quantile(v);
      return normal_cdf((y - alpha * x) / std::sqrt(1.0 - alpha * alpha));
    }
  }
  return 0.0;
}

double conditional_sample(Family family, double alpha, double u_t, double v) {
  check_domain(family, alpha);
  if (!(u_t > 0.0 && u_t < 1.0) || !(v > 0.0 && v < 1.0))
    throw DomainError("conditional sampling needs u_T, v strictly inside (0, 1)");
  switch (family) {
    case Family::Clayton: {
      const double base = std::pow(u_t, -alpha) * (std::pow(v, -alpha / (alpha + 1.0)) - 1.0) + 1.0;
      return std::pow(base, -1.0 / alpha);
    }
    case Family::Gaussian: {
      const double x = normal_quantile(u_t);
      return normal_cdf(alpha * x + std::sqrt(1.0 - alpha * alpha) * normal_quantile(v));
    }
    case Family::Frank:
    case Family::Gumbel: break;
  }

  // conditional_cdf is increasing in u_D from 0 to 1: bisect to a narrow
  // bracket, then Newton-polish inside it.
  double lo = 0.0;
  double hi = 1.0;
  int iter = 0;
  constexpr int kMaxIter = 200;
  for (; iter < kMaxIter && hi - lo > 1e-4; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (conditional_cdf(family, alpha, u_t, mid) < v ? lo : hi) = mid;
  }
  double w = 0.5 * (lo + hi);
  for (; iter < kMaxIter; ++iter) {
    const double r = conditional_cdf(family, alpha, u_t, w) - v;
    (r < 0.0 ? lo : hi) = w;
    const double slope =
        family == Family::Frank ? frank_density(u_t, w, alpha) : gumbel_density(u_t, w, alpha);
    double next = w - r / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - w);
    w = next;
    if (step < 1e-13 || hi - lo < 1e-13) return w;
  }
  throw RootFindError("conditional sampler did not converge");
}

double debye_integral(double x) {
  if (x == 0.0) return 0.0;
  auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, x, 8, 1e-14, &err);
}

double kendall_tau(Family family, double alpha) {
  check_domain(family, alpha);
  switch (family) {
    case Family::Clayton: return alpha / (alpha + 2.0);
    case Family::Gumbel: return (alpha - 1.0) / alpha;
    case Family::Gaussian: return 2.0 / std::numbers::pi * std::asin(alpha);
    case Family::Frank: {
      if (std::abs(alpha) < 1e-2) {
        const double a2 = alpha * alpha;
        return alpha * (1.0 / 9.0 - a2 / 900.0 + a2 * a2 / 52920.0);
      }
      return 1.0 - 4.0 / alpha + 4.0 * debye_integral(alpha) / (alpha * alpha);
    }
  }
  return 0.0;
}

double kendall_tau_derivative(Family family, double alpha) {
  check_domain(family, alpha);
  switch (family) {
    case Family::Clayton: return 2.0 / ((alpha + 2.0) * (alpha + 2.0));
    case Family::Gumbel: return 1.0 / (alpha * alpha);
    case Family::Gaussian: return 2.0 / std::numbers::pi / std::sqrt(1.0 - alpha * alpha);
    case Family::Frank: {
      if (std::abs(alpha) < 1e-2) {
        const double a2 = alpha * alpha;
        return 1.0 / 9.0 - 3.0 * a2 / 900.0 + 5.0 * a2 * a2 / 52920.0;
      }
      const double a2 = alpha * alpha;
      return 4.0 / a2 - 8.0 * debye_integral(alpha) / (a2 * alpha) + 4.0 / (alpha * std::expm1(alpha));
    }
  }
  return 0.0;
}

double tau_to_alpha(Family family, double tau) {
  if (!std::isfinite(tau)) throw UnattainableTauError("tau must be finite");
  switch (family) {
    case Family::Clayton:
      if (!(tau > 0.0 && tau < 1.0))
        throw UnattainableTauError("clayton (alpha > 0 branch) needs tau in (0, 1)");
      return 2.0 * tau / (1.0 - tau);
    case Family::Gumbel:
      if (!(tau >= 0.0 && tau < 1.0)) throw UnattainableTauError("gumbel needs tau in [0, 1)");
      return 1.0 / (1.0 - tau);
    case Family::Gaussian:
      if (!(tau > -1.0 && tau < 1.0)) throw UnattainableTauError("gaussian needs tau in (-1, 1)");
      return std::sin(std::numbers::pi * tau / 2.0);
    case Family::Frank: {
      if (!(tau > -1.0 && tau < 1.0) || tau == 0.0)
        throw UnattainableTauError("frank needs tau in (-1, 1) excluding 0");
      // tau(alpha) is odd and increasing; solve on the positive half-line.
      const double target = std::abs(tau);
      double lo = 0.0;
      double hi = 1.0;
      while (kendall_tau(Family::Frank, hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw UnattainableTauError("frank tau too close to 1");
      }
      for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid > 0.0 && kendall_tau(Family::Frank, mid) < target ? lo : hi) = mid;
      }
      const double alpha = 0.5 * (lo + hi);
      return tau < 0.0 ? -alpha : alpha;
    }
  }
  return 0.0;
}

std::string link_name(Link link) {
  switch (link) {
    case Link::Identity: return "identity";
    case Link::Log: return "log";
    case Link::LogitScaled: return "logit_scaled";
  }
  return "unknown";
}

Link parse_link(std::string_view name) {
  const std::string s = lower(name);
  if (s == "identity") return Link::Identity;
  if (s == "log") return Link::Log;
  if (s == "logit_scaled" || s == "logit-scaled") return Link::LogitScaled;
  throw DomainError("unknown link '" + std::string(name) + "'");
}

std::array<double, 3> link_derivatives(Link link, double eta) {
  switch (link) {
    case Link::Identity: return {eta, 1.0, 0.0};
    case Link::Log: {
      const double e = std::exp(eta);
      return {e, e, e};
    }
    case Link::LogitScaled: {
      const double phi = std::tanh(0.5 * eta);
      const double d1 = 0.5 * (1.0 - phi * phi);
      return {phi, d1, -phi * d1};
    }
  }
  return {0.0, 0.0, 0.0};
}

LinkedAlpha alpha_from_link(Family family, const Eigen::VectorXd& gamma, const Eigen::VectorXd& w,
                            Link link) {
  if (gamma.size() != w.size()) throw std::invalid_argument("gamma and w differ in dimension");
  const auto [alpha, slope, curvature] = link_derivatives(link, gamma.dot(w));
  (void)curvature;
  check_domain(family, alpha);
  return {alpha, slope * w};
}

}  // namespace semicomp
