#include "semicomp/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "semicomp/errors.hpp"

namespace semicomp {

std::string transform_name(Transform g) { return g == Transform::PH ? "ph" : "po"; }

Transform parse_transform(std::string_view name) {
  if (name == "ph" || name == "PH") return Transform::PH;
  if (name == "po" || name == "PO") return Transform::PO;
  throw DomainError("unknown transformation '" + std::string(name) + "'");
}

std::array<double, 4> g_derivs(Transform g, double x) {
  if (!(x >= 0.0)) throw DomainError("transformation argument must be nonnegative");
  if (g == Transform::PH) return {x, 1.0, 0.0, 0.0};
  const double r = 1.0 / (1.0 + x);
  return {std::log1p(x), r, -r * r, 2.0 * r * r * r};
}

Eigen::Index BaselineStep::count_le(double t) const {
  return std::upper_bound(times.data(), times.data() + times.size(), t) - times.data();
}

double BaselineStep::operator()(double t) const {
  if (!(t >= 0.0)) throw DomainError("baseline evaluated at negative time");
  return epsilon0 + jumps.head(count_le(t)).sum();
}

double marginal_survival(const MarginalModel& m, double t, const Eigen::VectorXd& z) {
  if (z.size() != m.beta.size()) throw std::invalid_argument("covariate dimension mismatch");
  return std::exp(-g_derivs(m.transform, m.baseline(t) * std::exp(m.beta.dot(z)))[0]);
}

}  // namespace semicomp
