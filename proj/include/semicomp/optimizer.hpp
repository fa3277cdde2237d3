#ifndef SEMICOMP_OPTIMIZER_HPP
#define SEMICOMP_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "semicomp/evaluation.hpp"

namespace semicomp {

struct TrustRegionConfig {
  double initial_radius = 1.0;
  double max_radius = 100.0;
  double eta_accept = 0.1;
  double gradient_tol = 1e-7;  // on the max-norm of the gradient
  double step_tol = 1e-10;
  int max_iter = 500;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Returns value, gradient and Hessian at x. A DomainError thrown by the objective
/// is treated as value -inf (the trial point is rejected).
using Objective = std::function<Evaluation(const Eigen::VectorXd&)>;

struct OptimizerDiagnostics {
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  double value = 0.0;
  double gradient_norm = 0.0;  // max-norm at the returned point
  bool hessian_modified = false;  // the final model Hessian needed eigenvalue flooring
  std::string message;
};

struct OptimizerResult {
  Eigen::VectorXd x;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  OptimizerDiagnostics diagnostics;
};

/// Trust-region Newton ascent with dogleg steps. Accepted iterates never lower the
/// objective, except by its rounding level once the model predicts a gain below it.
OptimizerResult maximize(const Objective& f, const Eigen::VectorXd& x0, const TrustRegionConfig& config = {});

/// Smooth bijections from an unconstrained coordinate a onto a parameter domain.
enum class CoordMap {
  Identity,   // x = a
  Log,        // x = e^a
  OnePlusExp, // x = 1 + e^a
  Tanh,       // x = tanh(a)
};

/// Returns (x, dx/da, d2x/da2).
Eigen::Vector3d coord_map_eval(CoordMap m, double a);
double coord_map_inverse(CoordMap m, double x);

struct Reparameterization {
  std::vector<CoordMap> maps;

  Eigen::Index size() const { return static_cast<Eigen::Index>(maps.size()); }
  Eigen::VectorXd to_natural(const Eigen::VectorXd& a) const;
  Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& x) const;
  /// Transforms a natural-coordinate evaluation at x = to_natural(a) to the a coordinates.
  Evaluation lift(const Evaluation& natural, const Eigen::VectorXd& a) const;
};

/// Wraps an objective in natural coordinates as one in unconstrained coordinates.
Objective chain_rule_lift(Objective natural, Reparameterization reparam);

}  // namespace semicomp

#endif  // SEMICOMP_OPTIMIZER_HPP
