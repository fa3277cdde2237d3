#ifndef SEMICOMP_LIKELIHOOD_HPP
#define SEMICOMP_LIKELIHOOD_HPP

#include <Eigen/Dense>
#include <optional>

#include "semicomp/copula.hpp"
#include "semicomp/dataset.hpp"
#include "semicomp/evaluation.hpp"
#include "semicomp/marginal.hpp"

namespace semicomp {

/// Regression coefficients and baseline jumps of one margin.
struct MarginParams {
  Eigen::VectorXd beta;
  Eigen::VectorXd dr;
};

using ThetaD = MarginParams;

/// Copula parameter (a single alpha, or gamma when alpha is linked to covariates) and the T margin.
struct Theta1 {
  Eigen::VectorXd alpha;
  MarginParams t;
};

struct ThetaFull {
  Theta1 theta1;
  ThetaD theta_d;
};

/// Stacked orders: margin (beta, dr); theta1 (alpha|gamma, beta_T, dr_T); full (theta1, beta_D, dr_D).
Eigen::VectorXd pack(const MarginParams& m);
Eigen::VectorXd pack(const Theta1& t);
Eigen::VectorXd pack(const ThetaFull& t);
MarginParams unpack_margin(const Eigen::VectorXd& v, Eigen::Index p);
Theta1 unpack_theta1(const Eigen::VectorXd& v, Eigen::Index n_alpha, Eigen::Index p);
ThetaFull unpack_full(const Eigen::VectorXd& v, Eigen::Index n_alpha, Eigen::Index p, Eigen::Index kappa_t);

struct CopulaSpec {
  Family family = Family::Gumbel;
  /// When set, alpha_i = phi(gamma' w_i) with w_i the dataset's copula covariates.
  std::optional<Link> link;
};

/// Log-likelihood of a single margin treating the other event as independent censoring.
/// Used for stage 1 (the terminal margin) and for naive starting values of the T margin.
class MarginalLikelihood {
 public:
  MarginalLikelihood(Eigen::VectorXd time, Eigen::VectorXi delta, Eigen::MatrixXd z, Transform g,
                     double epsilon0 = 0.0);
  static MarginalLikelihood terminal(const Dataset& d, Transform g_d);
  static MarginalLikelihood nonterminal_naive(const Dataset& d, Transform g_t);

  const EventGrid& grid() const { return grid_; }
  const Eigen::VectorXd& time() const { return time_; }
  const Eigen::VectorXi& delta() const { return delta_; }
  const Eigen::MatrixXd& z() const { return z_; }
  Eigen::Index n() const { return time_.size(); }
  Eigen::Index dim() const { return z_.cols() + grid_.size(); }
  Transform transform() const { return g_; }

  double loglik(const MarginParams& th) const;
  /// Sum of subject scores.
  Eigen::VectorXd score(const MarginParams& th) const;
  /// Minus the mean Hessian.
  Eigen::MatrixXd information(const MarginParams& th) const;
  /// n x dim matrix of subject scores.
  Eigen::MatrixXd subject_scores(const MarginParams& th) const;
  /// order 0: value only; 1: with gradient; 2: with Hessian.
  Evaluation evaluate(const MarginParams& th, int order) const;

 private:
  Eigen::VectorXd time_;
  Eigen::VectorXi delta_;
  Eigen::MatrixXd z_;
  Transform g_;
  double eps_;
  EventGrid grid_;
};

/// Semi-competing-risks log-likelihood under a copula for (T, D) with transformation margins.
class FullLikelihood {
 public:
  enum class Block { Theta1, Full };

  FullLikelihood(const Dataset& data, CopulaSpec copula, Transform g_t, Transform g_d,
                 double epsilon_t = 0.0, double epsilon_d = 0.0);

  const Dataset& data() const { return data_; }
  const CopulaSpec& copula() const { return copula_; }
  const EventGrid& grid_t() const { return grid_t_; }
  const EventGrid& grid_d() const { return grid_d_; }
  Transform g_t() const { return g_t_; }
  Transform g_d() const { return g_d_; }
  double epsilon_t() const { return eps_t_; }
  double epsilon_d() const { return eps_d_; }

  Eigen::Index n_alpha() const;
  Eigen::Index dim_theta1() const { return n_alpha() + data_.p() + grid_t_.size(); }
  Eigen::Index dim_theta_d() const { return data_.p() + grid_d_.size(); }
  Eigen::Index dim_full() const { return dim_theta1() + dim_theta_d(); }

  double loglik(const ThetaFull& th) const;
  Eigen::VectorXd score_theta1(const ThetaFull& th) const;  // sum over subjects
  Eigen::VectorXd score_full(const ThetaFull& th) const;    // sum over subjects
  Eigen::MatrixXd info_full(const ThetaFull& th) const;     // minus mean Hessian
  Eigen::MatrixXd info_theta1(const ThetaFull& th) const;

  /// n x dim matrices of subject scores.
  Eigen::MatrixXd subject_scores(const ThetaFull& th, Block block) const;
  /// Subject i's theta1 score, optionally with U_D,i replaced by u_d.
  Eigen::VectorXd subject_score_theta1(const ThetaFull& th, Eigen::Index i,
                                       std::optional<double> u_d = std::nullopt) const;
  /// n x dim_theta1: row i is d Psi_1,i / d U_D,i.
  Eigen::MatrixXd cross_theta1_uD(const ThetaFull& th) const;
  Eigen::VectorXd cross_theta1_uD(const ThetaFull& th, Eigen::Index i) const;

  /// Marginal survival values U_T,i = S_T(X_i), U_D,i = S_D(C_i) as used by the copula.
  Eigen::VectorXd u_t(const ThetaFull& th) const;
  Eigen::VectorXd u_d(const ThetaFull& th) const;

  Evaluation evaluate(const ThetaFull& th, Block block, int order) const;

  struct Subject;

 private:
  struct Prepared;
  Prepared prepare(const ThetaFull& th) const;
  Subject subject(const Prepared& p, Eigen::Index i, std::optional<double> u_d) const;

  Dataset data_;
  CopulaSpec copula_;
  Transform g_t_, g_d_;
  double eps_t_, eps_d_;
  EventGrid grid_t_, grid_d_;
  Eigen::MatrixXd w_;  // copula design, a column of ones when alpha is scalar
};

}  // namespace semicomp

#endif  // SEMICOMP_LIKELIHOOD_HPP
