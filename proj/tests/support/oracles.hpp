#ifndef SEMICOMP_TESTS_ORACLES_HPP
#define SEMICOMP_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Ridders/Richardson extrapolation of central differences of f at x.
template <typename F>
double richardson(F&& f, double x, double h, int levels = 6) {
  std::vector<std::vector<double>> a(levels, std::vector<double>(levels));
  double best = 0.0;
  double best_err = INFINITY;
  for (int i = 0; i < levels; ++i) {
    a[i][0] = (f(x + h) - f(x - h)) / (2.0 * h);
    double fac = 4.0;
    for (int j = 1; j <= i; ++j, fac *= 4.0) {
      a[i][j] = (fac * a[i][j - 1] - a[i - 1][j - 1]) / (fac - 1.0);
      const double err = std::max(std::abs(a[i][j] - a[i][j - 1]), std::abs(a[i][j] - a[i - 1][j - 1]));
      if (err < best_err) {
        best_err = err;
        best = a[i][j];
      }
    }
    if (i > 0 && std::abs(a[i][i] - a[i - 1][i - 1]) > 2.0 * best_err) break;
    h /= 2.0;
  }
  return levels == 1 ? a[0][0] : best;
}

/// Gradient of a scalar function with per-coordinate initial steps.
inline Eigen::VectorXd gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& steps) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    g[k] = richardson(
        [&](double t) {
          Eigen::VectorXd y = x;
          y[k] = t;
          return f(y);
        },
        x[k], steps[k]);
  }
  return g;
}

/// Jacobian of a vector function by central differences extrapolated over four halvings of the step.
inline Eigen::MatrixXd jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& steps) {
  const Eigen::Index m = f(x).size();
  Eigen::MatrixXd jac(m, x.size());
  constexpr int kLevels = 4;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    std::vector<Eigen::VectorXd> table;
    double h = steps[k];
    for (int i = 0; i < kLevels; ++i, h /= 2.0) {
      Eigen::VectorXd up = x, dn = x;
      up[k] += h;
      dn[k] -= h;
      table.push_back((f(up) - f(dn)) / (2.0 * h));
    }
    double fac = 4.0;
    for (int j = 1; j < kLevels; ++j, fac *= 4.0)
      for (int i = kLevels - 1; i >= j; --i) table[i] = (fac * table[i] - table[i - 1]) / (fac - 1.0);
    jac.col(k) = table.back();
  }
  return jac;
}

/// Relative error with a floor on the denominator.
inline double rel_err(double got, double want, double floor = 1e-3) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline double max_rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want, double floor = 1e-3) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.rows(); ++i)
    for (Eigen::Index j = 0; j < got.cols(); ++j)
      worst = std::max(worst, rel_err(got(i, j), want(i, j), floor));
  return worst;
}

/// Kendall's tau-a by Knight's O(n log n) merge-sort algorithm (no ties expected).
inline double kendall_tau_empirical(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  // Count inversions in ys = discordant pairs.
  std::vector<double> buf(n);
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          swaps += mid - i;
          buf[k++] = ys[j++];
        } else {
          buf[k++] = ys[i++];
        }
      }
      while (i < mid) buf[k++] = ys[i++];
      while (j < hi) buf[k++] = ys[j++];
    }
    std::swap(ys, buf);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return (pairs - 2.0 * static_cast<double>(swaps)) / pairs;
}

/// Composite Simpson rule on [a, b] with m (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle

#endif  // SEMICOMP_TESTS_ORACLES_HPP
