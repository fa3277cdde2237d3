#include "semicomp/inference.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semicomp/errors.hpp"

namespace semicomp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd h_vector(const ThetaD& theta_d, const VectorXd& grid_times, double t, const VectorXd& z, Transform g_d,
                  double epsilon0) {
  const Index p = theta_d.beta.size();
  const Index kappa = theta_d.dr.size();
  Index k = 0;
  while (k < kappa && grid_times[k] <= t) ++k;
  const double e = std::exp(theta_d.beta.dot(z));
  const double lambda = theta_d.dr.head(k).sum() * e;
  const auto g = g_derivs(g_d, lambda);
  const double scale = -std::exp(-g[0] - epsilon0) * g[1];

  VectorXd h = VectorXd::Zero(p + kappa);
  h.head(p) = scale * lambda * z;
  h.segment(p, k).setConstant(scale * e);
  return h;
}

MatrixXd h_matrix(const FullLikelihood& lik, const ThetaD& theta_d) {
  const Dataset& d = lik.data();
  MatrixXd h(d.size(), lik.dim_theta_d());
  for (Index i = 0; i < d.size(); ++i)
    h.row(i) = h_vector(theta_d, lik.grid_d().times, d.c[i], d.z.row(i).transpose(), lik.g_d(), lik.epsilon_d());
  return h;
}

Theta1Influence theta1_influence(const FullLikelihood& lik, const ThetaFull& th, const MatrixXd& psi_theta_d,
                                 SandwichForm form, bool include_correction) {
  const Index n = lik.data().size();
  const double nd = static_cast<double>(n);
  const MatrixXd scores = lik.subject_scores(th, FullLikelihood::Block::Theta1);
  const MatrixXd info = lik.info_theta1(th);
  const Eigen::PartialPivLU<MatrixXd> lu(info);
  if (!(lu.rcond() >= 1e-12)) throw SingularInformationError("theta1 information matrix is numerically singular");
  MatrixXd inv = lu.inverse();
  inv = 0.5 * (inv + inv.transpose()).eval();

  MatrixXd corrected = scores;
  if (include_correction) {
    const MatrixXd cross = lik.cross_theta1_uD(th);
    const MatrixXd h = h_matrix(lik, th.theta_d);
    if (form == SandwichForm::Materialized) {
      // psi_uD(k, i) = h_k' psi_D,i, then row i gains n^-1 sum_k cross_k psi_uD(k, i).
      const MatrixXd psi_ud = h * psi_theta_d.transpose();
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k) corrected.row(i) += cross.row(k) * (psi_ud(k, i) / nd);
    } else {
      const MatrixXd m = cross.transpose() * h / nd;
      corrected += psi_theta_d * m.transpose();
    }
  }

  Theta1Influence out;
  out.psi = corrected * inv;
  if (form == SandwichForm::Sandwich) {
    const MatrixXd v = corrected.transpose() * corrected / nd;
    out.sigma = inv * v * inv;
  } else {
    out.sigma = out.psi.transpose() * out.psi / nd;
  }
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();
  return out;
}

MatrixXd sandwich_theta1(const FullLikelihood& lik, const ThetaFull& th, const MatrixXd& psi_theta_d,
                         SandwichForm form, bool include_correction) {
  return theta1_influence(lik, th, psi_theta_d, form, include_correction).sigma;
}

double normal_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(1.0 - level);
}

namespace {

Interval wald(double estimate, double se, double level) {
  const double z = normal_critical(level);
  return {estimate, se, estimate - z * se, estimate + z * se, false};
}

const Eigen::Block<const MatrixXd> theta1_vcov(const FitResult& fit) {
  const Index d1 = fit.dim_theta1();
  return fit.vcov.topLeftCorner(d1, d1);
}

double scalar_alpha(const FitResult& fit) {
  if (fit.model.copula.link || fit.theta.theta1.alpha.size() != 1)
    throw std::invalid_argument("the copula parameter is linked to covariates; no single alpha to report");
  return fit.theta.theta1.alpha[0];
}

}  // namespace

Interval ci_linear_functional(const FitResult& fit, const VectorXd& b, double level) {
  const Index d1 = fit.dim_theta1();
  if (b.size() != d1) throw std::invalid_argument("linear functional has the wrong length");
  const VectorXd vb = theta1_vcov(fit) * b;
  return wald(b.dot(pack(fit.theta.theta1)), std::sqrt(std::max(0.0, b.dot(vb))), level);
}

Interval ci_linear_functional(const FitResult& fit, const VectorXd& b_alpha, const VectorXd& b_beta_t,
                              const VectorXd& b_r_t, double level) {
  if (b_alpha.size() != fit.theta.theta1.alpha.size() || b_beta_t.size() != fit.theta.theta1.t.beta.size() ||
      b_r_t.size() != fit.grid_t.size())
    throw std::invalid_argument("linear functional blocks have the wrong lengths");
  VectorXd b(fit.dim_theta1());
  b << b_alpha, b_beta_t, b_r_t;
  return ci_linear_functional(fit, b, level);
}

Interval ci_alpha(const FitResult& fit, double level) {
  const double alpha = scalar_alpha(fit);
  Interval r = wald(alpha, fit.se[0], level);
  double lower = -INFINITY, upper = INFINITY;
  switch (fit.model.copula.family) {
    case Family::Clayton: lower = 0.0; break;
    case Family::Gumbel: lower = 1.0; break;
    case Family::Gaussian: lower = -1.0; upper = 1.0; break;
    case Family::Frank: break;
  }
  if (r.lo < lower) {
    r.lo = lower;
    r.truncated = true;
  }
  if (r.hi > upper) {
    r.hi = upper;
    r.truncated = true;
  }
  return r;
}

Interval ci_baseline_survival(const FitResult& fit, double t0, double level) {
  if (!(t0 >= 0.0) || t0 > fit.xi) throw DomainError("t0 must lie within [0, largest follow-up time]");
  const Index kappa = fit.grid_t.size();
  const Index d1 = fit.dim_theta1();
  VectorXd b = VectorXd::Zero(d1);
  for (Index l = 0; l < kappa && fit.grid_t[l] <= t0; ++l) b[d1 - kappa + l] = 1.0;
  const Interval r_ci = ci_linear_functional(fit, b, level);
  const Transform g = fit.model.g_t;
  const double r_lo = std::max(0.0, r_ci.lo);
  const auto gd = g_derivs(g, r_ci.estimate);
  const double s = std::exp(-gd[0]);
  // se is the delta-method standard error of S itself.
  return {s, s * gd[1] * r_ci.se, std::exp(-g_derivs(g, r_ci.hi)[0]), std::exp(-g_derivs(g, r_lo)[0]), false};
}

Interval tau_ci(const FitResult& fit, double level) {
  const double alpha = scalar_alpha(fit);
  const Family fam = fit.model.copula.family;
  const double se = std::abs(kendall_tau_derivative(fam, alpha)) * fit.se[0];
  Interval r = wald(kendall_tau(fam, alpha), se, level);
  if (r.lo < -1.0) r.lo = -1.0, r.truncated = true;
  if (r.hi > 1.0) r.hi = 1.0, r.truncated = true;
  return r;
}

}  // namespace semicomp
