#ifndef SEMICOMP_ESTIMATION_HPP
#define SEMICOMP_ESTIMATION_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "semicomp/likelihood.hpp"
#include "semicomp/optimizer.hpp"

namespace semicomp {

enum class Method { PMLE, MLE };

std::string method_name(Method m);
Method parse_method(std::string_view name);

struct ModelSpec {
  CopulaSpec copula;
  Transform g_t = Transform::PH;
  Transform g_d = Transform::PH;
  /// Gumbel only: shift both baselines by 1/n inside the likelihood of stage 2
  /// (and of the one-stage fit) so that u values never sit exactly at 1.
  bool gumbel_epsilon_auto = true;
};

struct FitOptions {
  TrustRegionConfig optimizer;
  /// One-stage fits normally start from the two-stage estimate; when set they
  /// start from the same starting values the two-stage fit uses.
  bool mle_independent_start = false;
  /// Include the stage-1 estimation term in the two-stage sandwich. Off only for ablation.
  bool stage1_correction = true;
};

/// Baseline shift applied to both margins for this model and sample size.
double model_epsilon(const ModelSpec& model, Eigen::Index n);

/// Unconstrained coordinates for the stacked margin, theta1 and full vectors.
Reparameterization margin_reparam(Eigen::Index p, Eigen::Index kappa);
Reparameterization theta1_reparam(const CopulaSpec& copula, Eigen::Index n_alpha, Eigen::Index p,
                                  Eigen::Index kappa_t);

struct MarginFit {
  MarginParams theta;
  Eigen::MatrixXd info;       // minus the mean Hessian at theta
  Eigen::MatrixXd influence;  // n x dim, row i = info^-1 Psi_i
  Eigen::MatrixXd vcov;       // robust: influence' influence / n^2
  OptimizerDiagnostics diagnostics;
};

/// Maximizes a single-margin likelihood. With fixed_beta only the jumps are free,
/// and info/influence cover the jumps alone.
MarginFit fit_margin(const MarginalLikelihood& lik, const FitOptions& options,
                     const std::optional<Eigen::VectorXd>& fixed_beta = std::nullopt);

/// Stage 1: the terminal margin from (C, delta_D).
MarginFit fit_stage1(const Dataset& data, Transform g_d, const FitOptions& options,
                     const std::optional<Eigen::VectorXd>& fixed_beta = std::nullopt);

/// Start for theta1: the naive T fit from (X, delta_T) and a 1-D search over tau
/// of the pseudo-log-likelihood with both margins held fixed.
Theta1 starting_values(const Dataset& data, const ModelSpec& model, const ThetaD& theta_d,
                       const FitOptions& options);

struct FitResult {
  Method method = Method::PMLE;
  ModelSpec model;
  ThetaFull theta;
  Eigen::VectorXd grid_t;  // event-time grids carrying dr_T and dr_D
  Eigen::VectorXd grid_d;
  Eigen::Index n = 0;
  double xi = 0.0;  // largest follow-up time
  double epsilon = 0.0;
  double loglik = 0.0;   // mean full log-likelihood at theta
  Eigen::MatrixXd vcov;  // over pack(theta)
  Eigen::VectorXd se;    // sqrt(diag(vcov))
  bool converged = false;
  int iterations = 0;
  /// Largest eigenvalue of the lifted Hessian at the solution (negative at a strict maximum).
  double max_hessian_eigenvalue = 0.0;
  OptimizerDiagnostics stage1;
  OptimizerDiagnostics stage2;
  /// Robust covariance of sqrt(n)(theta1_hat - theta1), i.e. vcov block times n.
  Eigen::MatrixXd sigma1;

  Eigen::Index dim_theta1() const { return theta.theta1.alpha.size() + theta.theta1.t.beta.size() + grid_t.size(); }
};

FitResult fit_pmle(const Dataset& data, const ModelSpec& model, const FitOptions& options = {});
FitResult fit_mle(const Dataset& data, const ModelSpec& model, const FitOptions& options = {});
FitResult fit(const Dataset& data, const ModelSpec& model, Method method, const FitOptions& options = {});

}  // namespace semicomp

#endif  // SEMICOMP_ESTIMATION_HPP
