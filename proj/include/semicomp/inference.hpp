#ifndef SEMICOMP_INFERENCE_HPP
#define SEMICOMP_INFERENCE_HPP

#include <Eigen/Dense>

#include "semicomp/estimation.hpp"
#include "semicomp/likelihood.hpp"

namespace semicomp {

/// Gradient in theta_D = (beta_D, dr_D) of the terminal survival
/// exp(-G_D(R_D(t) e^{beta_D'z}) - epsilon0), with R_D jumping at grid_times.
Eigen::VectorXd h_vector(const ThetaD& theta_d, const Eigen::VectorXd& grid_times, double t,
                         const Eigen::VectorXd& z, Transform g_d, double epsilon0 = 0.0);

/// Row i = h_vector at (C_i, Z_i), the sensitivity of U_D,i as used by lik.
Eigen::MatrixXd h_matrix(const FullLikelihood& lik, const ThetaD& theta_d);

enum class SandwichForm {
  Contraction,   // correction through the (dim_theta1 x dim_theta_d) matrix n^-1 sum_k l_k h_k'
  Materialized,  // correction through the explicit n x n matrix psi_uD(k, i) = h_k' psi_D,i
  Sandwich,      // I^-1 V I^-1 with V the mean outer product of corrected scores
};

struct Theta1Influence {
  Eigen::MatrixXd psi;  // n x dim_theta1
  Eigen::MatrixXd sigma;  // n^-1 sum psi_i psi_i'
};

/// Influence functions of the two-stage theta1 estimator given the stage-1 influence
/// psi_theta_d (n x dim_theta_d). include_correction = false drops the stage-1 term.
Theta1Influence theta1_influence(const FullLikelihood& lik, const ThetaFull& th, const Eigen::MatrixXd& psi_theta_d,
                                 SandwichForm form = SandwichForm::Contraction, bool include_correction = true);

Eigen::MatrixXd sandwich_theta1(const FullLikelihood& lik, const ThetaFull& th, const Eigen::MatrixXd& psi_theta_d,
                                SandwichForm form = SandwichForm::Contraction, bool include_correction = true);

struct Interval {
  double estimate = 0.0;
  double se = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool truncated = false;  // an endpoint was moved onto the parameter domain boundary
};

/// Two-sided standard normal quantile for a confidence level.
double normal_critical(double level);

/// b'theta1 with b laid out as (alpha|gamma, beta_T, dr_T).
Interval ci_linear_functional(const FitResult& fit, const Eigen::VectorXd& b_alpha, const Eigen::VectorXd& b_beta_t,
                              const Eigen::VectorXd& b_r_t, double level = 0.95);
Interval ci_linear_functional(const FitResult& fit, const Eigen::VectorXd& b, double level = 0.95);

/// Wald interval for a scalar alpha, cut back to the family's domain.
Interval ci_alpha(const FitResult& fit, double level = 0.95);

/// S_T0(t0) = exp(-G_T(R_T(t0))) with the interval mapped from the Wald interval of R_T(t0).
/// Here lo/hi are survival values, so lo <= estimate <= hi.
Interval ci_baseline_survival(const FitResult& fit, double t0, double level = 0.95);

/// Kendall's tau with the delta-method standard error.
Interval tau_ci(const FitResult& fit, double level = 0.95);

}  // namespace semicomp

#endif  // SEMICOMP_INFERENCE_HPP
