#ifndef SEMICOMP_MARGINAL_HPP
#define SEMICOMP_MARGINAL_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>

namespace semicomp {

/// Transformation G in S(t|z) = exp(-G(R(t) e^{beta'z})): PH is G(x) = x, PO is G(x) = log(1 + x).
enum class Transform { PH, PO };

std::string transform_name(Transform g);
Transform parse_transform(std::string_view name);

/// G and its first three derivatives at x >= 0.
std::array<double, 4> g_derivs(Transform g, double x);

inline double g_deriv(Transform g, double x, int order) { return g_derivs(g, x).at(order); }

/// Right-continuous step baseline R(t) = epsilon0 + sum of jumps at times <= t.
struct BaselineStep {
  Eigen::VectorXd times;
  Eigen::VectorXd jumps;
  double epsilon0 = 0.0;

  /// Number of grid times <= t.
  Eigen::Index count_le(double t) const;
  double operator()(double t) const;
};

inline double baseline_eval(const BaselineStep& r, double t) { return r(t); }

struct MarginalModel {
  Eigen::VectorXd beta;
  BaselineStep baseline;
  Transform transform = Transform::PH;
};

double marginal_survival(const MarginalModel& m, double t, const Eigen::VectorXd& z);

}  // namespace semicomp

#endif  // SEMICOMP_MARGINAL_HPP
