#include "semicomp/estimation.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cctype>
#include <cmath>
#include <limits>

#include "semicomp/errors.hpp"
#include "semicomp/inference.hpp"

namespace semicomp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string method_name(Method m) { return m == Method::PMLE ? "pmle" : "mle"; }

Method parse_method(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "pmle") return Method::PMLE;
  if (s == "mle") return Method::MLE;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected pmle or mle)");
}

double model_epsilon(const ModelSpec& model, Index n) {
  return model.copula.family == Family::Gumbel && model.gumbel_epsilon_auto ? 1.0 / static_cast<double>(n) : 0.0;
}

Reparameterization margin_reparam(Index p, Index kappa) {
  std::vector<CoordMap> maps(p, CoordMap::Identity);
  maps.resize(p + kappa, CoordMap::Log);
  return {maps};
}

Reparameterization theta1_reparam(const CopulaSpec& copula, Index n_alpha, Index p, Index kappa_t) {
  std::vector<CoordMap> maps;
  if (copula.link) {
    maps.assign(n_alpha, CoordMap::Identity);
  } else {
    switch (copula.family) {
      case Family::Clayton: maps.push_back(CoordMap::Log); break;
      case Family::Gumbel: maps.push_back(CoordMap::OnePlusExp); break;
      case Family::Gaussian: maps.push_back(CoordMap::Tanh); break;
      case Family::Frank: maps.push_back(CoordMap::Identity); break;
    }
  }
  const Reparameterization m = margin_reparam(p, kappa_t);
  maps.insert(maps.end(), m.maps.begin(), m.maps.end());
  return {maps};
}

namespace {

// Symmetric inverse after the reciprocal-condition guard.
MatrixXd checked_inverse(const MatrixXd& info, const char* what) {
  const Eigen::PartialPivLU<MatrixXd> lu(info);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12))
    throw SingularInformationError(std::string(what) + ": information matrix is numerically singular (rcond " +
                                   std::to_string(rcond) + ")");
  MatrixXd inv = lu.inverse();
  return 0.5 * (inv + inv.transpose());
}

Evaluation scaled(Evaluation e, double n) {
  e.value *= n;
  e.gradient *= n;
  e.hessian *= n;
  return e;
}

double max_eigenvalue(const MatrixXd& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

// Maximizes in unconstrained coordinates until the natural-scale gradient meets the
// tolerance. The lifted gradient is the natural one times dx/da, which is small for
// small jumps, so the optimizer may need a tighter lifted tolerance.
double natural_gradient_norm(const OptimizerResult& r, const Reparameterization& rp) {
  VectorXd jac(r.x.size());
  for (Index k = 0; k < r.x.size(); ++k) jac[k] = coord_map_eval(rp.maps[k], r.x[k])[1];
  return r.gradient.cwiseQuotient(jac).cwiseAbs().maxCoeff();
}

// Distance from x to the edge of the domain of its coordinate map.
double boundary_distance(const Reparameterization& rp, const VectorXd& x) {
  double d = INFINITY;
  for (Index k = 0; k < x.size(); ++k) {
    switch (rp.maps[k]) {
      case CoordMap::Identity: break;
      case CoordMap::Log: d = std::min(d, x[k]); break;
      case CoordMap::OnePlusExp: d = std::min(d, x[k] - 1.0); break;
      case CoordMap::Tanh: d = std::min(d, 1.0 - std::abs(x[k])); break;
    }
  }
  return d;
}

// Ascent in the unconstrained coordinates, then a short trust-region run directly on the
// natural scale. The tolerance applies to the natural gradient, which the lifted run
// cannot always reach: for a tiny baseline jump dr the lifted gradient is dr times the
// natural one and sits at rounding level long before the natural one does.
OptimizerResult maximize_natural(const Objective& natural, const Reparameterization& rp, const VectorXd& x0,
                                 const TrustRegionConfig& config) {
  OptimizerResult r = maximize(chain_rule_lift(natural, rp), rp.to_unconstrained(x0), config);
  r.diagnostics.gradient_norm = natural_gradient_norm(r, rp);
  const int used = r.diagnostics.iterations;
  if (r.diagnostics.gradient_norm < config.gradient_tol || used >= config.max_iter) {
    r.diagnostics.converged = r.diagnostics.gradient_norm < config.gradient_tol;
    return r;
  }

  const VectorXd x = rp.to_natural(r.x);
  TrustRegionConfig cfg = config;
  const double dist = boundary_distance(rp, x);
  cfg.initial_radius = std::min(config.initial_radius, 0.5 * dist);
  // Natural-scale curvature in a jump dr is of order dr^-2, so Newton steps shrink with dr^2.
  cfg.step_tol = config.step_tol * std::min(1.0, dist * dist);
  cfg.max_radius = std::max(cfg.initial_radius, config.max_radius);
  cfg.max_iter = config.max_iter - used;
  OptimizerResult polish = maximize(natural, x, cfg);

  OptimizerResult out;
  out.x = rp.to_unconstrained(polish.x);
  const Evaluation lifted = rp.lift({polish.diagnostics.value, polish.gradient, polish.hessian}, out.x);
  out.gradient = lifted.gradient;
  out.hessian = lifted.hessian;
  out.diagnostics = polish.diagnostics;
  out.diagnostics.iterations += used;
  out.diagnostics.evaluations += r.diagnostics.evaluations;
  if (!out.diagnostics.converged && r.diagnostics.converged) out.diagnostics.message = "natural-scale gradient above tolerance";
  return out;
}

double link_inverse(Link link, double alpha) {
  switch (link) {
    case Link::Identity: return alpha;
    case Link::Log: return std::log(alpha);
    case Link::LogitScaled: return 2.0 * std::atanh(alpha);
  }
  return alpha;
}

}  // namespace

MarginFit fit_margin(const MarginalLikelihood& lik, const FitOptions& options,
                     const std::optional<VectorXd>& fixed_beta) {
  const Index p = lik.z().cols();
  const Index kappa = lik.grid().size();
  const double n = static_cast<double>(lik.n());
  if (kappa == 0) throw DomainError("margin fit needs at least one observed event");

  // Nelson-Aalen jumps at beta = 0 as the start.
  VectorXd dr0(kappa);
  for (Index l = 0; l < kappa; ++l) {
    const double at_risk = (lik.time().array() >= lik.grid().times[l]).cast<double>().sum();
    dr0[l] = lik.grid().events[l] / at_risk;
  }

  MarginFit out;
  if (fixed_beta) {
    if (fixed_beta->size() != p) throw DomainError("fixed beta has the wrong length");
    const VectorXd beta = *fixed_beta;
    const Objective natural = [&](const VectorXd& dr) {
      Evaluation e = lik.evaluate({beta, dr}, 2);
      e.gradient = e.gradient.tail(kappa).eval();
      e.hessian = e.hessian.bottomRightCorner(kappa, kappa).eval();
      return scaled(std::move(e), n);
    };
    const Reparameterization rp = margin_reparam(0, kappa);
    const OptimizerResult r = maximize_natural(natural, rp, dr0, options.optimizer);
    out.theta = {beta, rp.to_natural(r.x)};
    out.diagnostics = r.diagnostics;
    out.info = lik.information(out.theta).bottomRightCorner(kappa, kappa);
    const MatrixXd inv = checked_inverse(out.info, "stage 1");
    out.influence = lik.subject_scores(out.theta).rightCols(kappa) * inv;
  } else {
    const Objective natural = [&](const VectorXd& x) { return scaled(lik.evaluate(unpack_margin(x, p), 2), n); };
    const Reparameterization rp = margin_reparam(p, kappa);
    VectorXd x0(p + kappa);
    x0 << VectorXd::Zero(p), dr0;
    const OptimizerResult r = maximize_natural(natural, rp, x0, options.optimizer);
    out.theta = unpack_margin(rp.to_natural(r.x), p);
    out.diagnostics = r.diagnostics;
    out.info = lik.information(out.theta);
    const MatrixXd inv = checked_inverse(out.info, "margin");
    out.influence = lik.subject_scores(out.theta) * inv;
  }
  out.vcov = out.influence.transpose() * out.influence / (n * n);
  return out;
}

MarginFit fit_stage1(const Dataset& data, Transform g_d, const FitOptions& options,
                     const std::optional<VectorXd>& fixed_beta) {
  if (data.delta_d.sum() == 0) throw DomainError("stage 1 needs at least one observed terminal event");
  return fit_margin(MarginalLikelihood::terminal(data, g_d), options, fixed_beta);
}

Theta1 starting_values(const Dataset& data, const ModelSpec& model, const ThetaD& theta_d, const FitOptions& options) {
  const MarginFit naive = fit_margin(MarginalLikelihood::nonterminal_naive(data, model.g_t), options);
  const double eps = model_epsilon(model, data.size());
  const Family fam = model.copula.family;
  const FullLikelihood lik(data, {fam, std::nullopt}, model.g_t, model.g_d, eps, eps);

  ThetaFull th{{VectorXd::Zero(1), naive.theta}, theta_d};
  const auto negative_loglik = [&](double tau) {
    try {
      th.theta1.alpha[0] = tau_to_alpha(fam, tau);
      const double v = lik.loglik(th);
      return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
    } catch (const DomainError&) {
      return std::numeric_limits<double>::max();
    }
  };
  double lo = -0.95, hi = 0.95;
  if (fam == Family::Clayton) lo = 1e-4;
  if (fam == Family::Gumbel) lo = 0.0;
  const auto best = boost::math::tools::brent_find_minima(negative_loglik, lo, hi, 30);
  const double alpha0 = tau_to_alpha(fam, best.first);

  Theta1 out;
  out.t = naive.theta;
  if (model.copula.link) {
    // gamma with gamma'w_i as close as possible (least squares) to the constant phi^-1(alpha0).
    const double eta = link_inverse(*model.copula.link, alpha0);
    out.alpha = data.w.colPivHouseholderQr().solve(VectorXd::Constant(data.size(), eta));
  } else {
    out.alpha = VectorXd::Constant(1, alpha0);
  }
  return out;
}

namespace {

FitResult base_result(const Dataset& data, const ModelSpec& model, const FullLikelihood& lik, Method method) {
  FitResult r;
  r.method = method;
  r.model = model;
  r.grid_t = lik.grid_t().times;
  r.grid_d = lik.grid_d().times;
  r.n = data.size();
  r.xi = follow_up_max(data);
  r.epsilon = lik.epsilon_t();
  return r;
}

void finish(FitResult& r, const FullLikelihood& lik) {
  r.loglik = lik.loglik(r.theta);
  r.vcov = 0.5 * (r.vcov + r.vcov.transpose()).eval();
  r.se = r.vcov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

FitResult fit_pmle(const Dataset& data, const ModelSpec& model, const FitOptions& options) {
  data.validate();
  const MarginFit stage1 = fit_stage1(data, model.g_d, options);
  const double eps = model_epsilon(model, data.size());
  const FullLikelihood lik(data, model.copula, model.g_t, model.g_d, eps, eps);
  const Index p = data.p();
  const Index n_alpha = lik.n_alpha();
  const double n = static_cast<double>(data.size());

  const Theta1 start = starting_values(data, model, stage1.theta, options);
  const Objective natural = [&](const VectorXd& x) {
    const ThetaFull t{unpack_theta1(x, n_alpha, p), stage1.theta};
    return scaled(lik.evaluate(t, FullLikelihood::Block::Theta1, 2), n);
  };
  const Reparameterization rp = theta1_reparam(model.copula, n_alpha, p, lik.grid_t().size());
  const OptimizerResult opt = maximize_natural(natural, rp, pack(start), options.optimizer);

  FitResult r = base_result(data, model, lik, Method::PMLE);
  r.theta = {unpack_theta1(rp.to_natural(opt.x), n_alpha, p), stage1.theta};
  r.stage1 = stage1.diagnostics;
  r.stage2 = opt.diagnostics;
  r.converged = stage1.diagnostics.converged && opt.diagnostics.converged;
  r.iterations = stage1.diagnostics.iterations + opt.diagnostics.iterations;
  r.max_hessian_eigenvalue = max_eigenvalue(opt.hessian);

  // theta1 block from the corrected sandwich, theta_D block from stage 1, cross block
  // from the joint influence functions.
  const Theta1Influence infl = theta1_influence(lik, r.theta, stage1.influence, SandwichForm::Contraction,
                                                     options.stage1_correction);
  const Index d1 = lik.dim_theta1();
  const Index dd = lik.dim_theta_d();
  r.sigma1 = infl.sigma;
  r.vcov.resize(d1 + dd, d1 + dd);
  r.vcov.topLeftCorner(d1, d1) = infl.sigma / n;
  r.vcov.bottomRightCorner(dd, dd) = stage1.vcov;
  r.vcov.topRightCorner(d1, dd) = infl.psi.transpose() * stage1.influence / (n * n);
  r.vcov.bottomLeftCorner(dd, d1) = r.vcov.topRightCorner(d1, dd).transpose();
  finish(r, lik);
  return r;
}

FitResult fit_mle(const Dataset& data, const ModelSpec& model, const FitOptions& options) {
  data.validate();
  const double eps = model_epsilon(model, data.size());
  const FullLikelihood lik(data, model.copula, model.g_t, model.g_d, eps, eps);
  const Index p = data.p();
  const Index n_alpha = lik.n_alpha();
  const Index kappa_t = lik.grid_t().size();
  const double n = static_cast<double>(data.size());

  ThetaFull start;
  OptimizerDiagnostics stage1_diag;
  int prior_iterations = 0;
  if (options.mle_independent_start) {
    const MarginFit stage1 = fit_stage1(data, model.g_d, options);
    start = {starting_values(data, model, stage1.theta, options), stage1.theta};
    stage1_diag = stage1.diagnostics;
    prior_iterations = stage1.diagnostics.iterations;
  } else {
    const FitResult pm = fit_pmle(data, model, options);
    start = pm.theta;
    stage1_diag = pm.stage1;
    prior_iterations = pm.iterations;
  }

  const Objective natural = [&](const VectorXd& x) {
    return scaled(lik.evaluate(unpack_full(x, n_alpha, p, kappa_t), FullLikelihood::Block::Full, 2), n);
  };
  Reparameterization rp = theta1_reparam(model.copula, n_alpha, p, kappa_t);
  const Reparameterization rd = margin_reparam(p, lik.grid_d().size());
  rp.maps.insert(rp.maps.end(), rd.maps.begin(), rd.maps.end());
  const OptimizerResult opt = maximize_natural(natural, rp, pack(start), options.optimizer);

  FitResult r = base_result(data, model, lik, Method::MLE);
  r.theta = unpack_full(rp.to_natural(opt.x), n_alpha, p, kappa_t);
  r.stage1 = stage1_diag;
  r.stage2 = opt.diagnostics;
  r.converged = opt.diagnostics.converged;
  r.iterations = prior_iterations + opt.diagnostics.iterations;
  r.max_hessian_eigenvalue = max_eigenvalue(opt.hessian);

  // Robust I^-1 V I^-1 / n with V the mean outer product of full subject scores.
  const MatrixXd inv = checked_inverse(lik.info_full(r.theta), "one-stage fit");
  const MatrixXd s = lik.subject_scores(r.theta, FullLikelihood::Block::Full);
  const MatrixXd v = s.transpose() * s / n;
  r.vcov = inv * v * inv / n;
  const Index d1 = lik.dim_theta1();
  r.sigma1 = n * r.vcov.topLeftCorner(d1, d1);
  finish(r, lik);
  return r;
}

FitResult fit(const Dataset& data, const ModelSpec& model, Method method, const FitOptions& options) {
  return method == Method::PMLE ? fit_pmle(data, model, options) : fit_mle(data, model, options);
}

}  // namespace semicomp
