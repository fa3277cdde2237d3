#include "semicomp/optimizer.hpp"

#include <cmath>
#include <limits>

#include "semicomp/errors.hpp"

namespace semicomp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void TrustRegionConfig::validate() const {
  if (!(initial_radius > 0.0) || !(max_radius >= initial_radius))
    throw ConfigError("optimizer: need 0 < initial_radius <= max_radius");
  if (!(eta_accept > 0.0 && eta_accept < 0.25)) throw ConfigError("optimizer: eta_accept must lie in (0, 0.25)");
  if (!(gradient_tol > 0.0) || !(step_tol > 0.0)) throw ConfigError("optimizer: tolerances must be positive");
  if (max_iter < 1) throw ConfigError("optimizer: max_iter must be at least 1");
}

namespace {

struct ModelStep {
  VectorXd step;
  double predicted = 0.0;  // model increase g'p - p'Bp/2
};

// Factorization of B = -H, floored to positive definite when needed.
class NegatedHessian {
 public:
  explicit NegatedHessian(const MatrixXd& hessian) : b_(-0.5 * (hessian + hessian.transpose())) {
    llt_.compute(b_);
    if (llt_.info() == Eigen::Success) return;
    modified_ = true;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b_);
    const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double floor = scale > 0.0 ? 1e-8 * scale : 1e-8;
    const VectorXd lambda = eig.eigenvalues().cwiseMax(floor);
    b_ = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
    inverse_ = eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  }

  bool modified() const { return modified_; }
  const MatrixXd& matrix() const { return b_; }
  VectorXd solve(const VectorXd& g) const { return modified_ ? VectorXd(inverse_ * g) : VectorXd(llt_.solve(g)); }

 private:
  MatrixXd b_;
  Eigen::LLT<MatrixXd> llt_;
  MatrixXd inverse_;
  bool modified_ = false;
};

ModelStep dogleg(const NegatedHessian& b, const VectorXd& g, double radius) {
  const VectorXd newton = b.solve(g);
  VectorXd p;
  if (newton.norm() <= radius) {
    p = newton;
  } else {
    const double gbg = g.dot(b.matrix() * g);
    const VectorXd cauchy = (g.squaredNorm() / gbg) * g;
    if (cauchy.norm() >= radius) {
      p = (radius / g.norm()) * g;
    } else {
      // Largest tau in [0, 1] with |cauchy + tau (newton - cauchy)| = radius.
      const VectorXd d = newton - cauchy;
      const double a = d.squaredNorm();
      const double bq = 2.0 * cauchy.dot(d);
      const double c = cauchy.squaredNorm() - radius * radius;
      const double tau = (-bq + std::sqrt(bq * bq - 4.0 * a * c)) / (2.0 * a);
      p = cauchy + tau * d;
    }
  }
  return {p, g.dot(p) - 0.5 * p.dot(b.matrix() * p)};
}

double max_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

OptimizerResult maximize(const Objective& f, const VectorXd& x0, const TrustRegionConfig& config) {
  config.validate();
  if (!x0.allFinite()) throw DomainError("maximize: non-finite starting point");

  OptimizerResult out;
  OptimizerDiagnostics& diag = out.diagnostics;
  VectorXd x = x0;
  Evaluation cur = f(x);
  ++diag.evaluations;
  if (!std::isfinite(cur.value)) throw DomainError("maximize: objective is not finite at the starting point");

  double radius = config.initial_radius;
  bool modified = false;
  while (true) {
    const double gnorm = max_norm(cur.gradient);
    if (gnorm < config.gradient_tol) {
      diag.converged = true;
      diag.message = "gradient tolerance reached";
      break;
    }
    if (diag.iterations >= config.max_iter) {
      diag.message = "iteration limit reached";
      break;
    }
    ++diag.iterations;

    const NegatedHessian b(cur.hessian);
    modified = b.modified();
    const ModelStep m = dogleg(b, cur.gradient, radius);
    const double step_norm = m.step.norm();
    if (step_norm < config.step_tol) {
      diag.message = "step below tolerance";
      break;
    }

    const VectorXd trial_x = x + m.step;
    Evaluation trial;
    try {
      trial = f(trial_x);
    } catch (const DomainError&) {
      trial.value = -std::numeric_limits<double>::infinity();
    }
    ++diag.evaluations;
    if (!std::isfinite(trial.value)) trial.value = -std::numeric_limits<double>::infinity();

    const double actual = trial.value - cur.value;
    // Below this the value difference is rounding, and the gradient decides instead.
    const double noise = 1e-13 * (1.0 + std::abs(cur.value));
    const bool in_noise = m.predicted < noise && std::isfinite(trial.value) && actual > -noise &&
                          max_norm(trial.gradient) < gnorm;
    const double rho = in_noise ? 1.0 : m.predicted > 0.0 ? actual / m.predicted : -1.0;
    if (rho < 0.25)
      radius = 0.25 * step_norm;
    else if (rho > 0.75 && step_norm >= 0.99 * radius)
      radius = std::min(2.0 * radius, config.max_radius);

    if (in_noise || (rho > config.eta_accept && actual > 0.0)) {
      x = trial_x;
      cur = std::move(trial);
    } else if (actual == 0.0 && m.predicted <= 0.0) {
      // The model sees no further ascent and neither does the objective.
      diag.message = "no further ascent";
      break;
    }
  }

  diag.value = cur.value;
  diag.gradient_norm = max_norm(cur.gradient);
  diag.hessian_modified = modified;
  out.x = std::move(x);
  out.gradient = std::move(cur.gradient);
  out.hessian = std::move(cur.hessian);
  return out;
}

Eigen::Vector3d coord_map_eval(CoordMap m, double a) {
  switch (m) {
    case CoordMap::Identity:
      return {a, 1.0, 0.0};
    case CoordMap::Log: {
      const double e = std::exp(a);
      return {e, e, e};
    }
    case CoordMap::OnePlusExp: {
      const double e = std::exp(a);
      return {1.0 + e, e, e};
    }
    case CoordMap::Tanh: {
      const double t = std::tanh(a);
      const double d = 1.0 - t * t;
      return {t, d, -2.0 * t * d};
    }
  }
  return {a, 1.0, 0.0};
}

double coord_map_inverse(CoordMap m, double x) {
  switch (m) {
    case CoordMap::Identity:
      return x;
    case CoordMap::Log:
      if (!(x > 0.0)) throw DomainError("log map: value must be positive");
      return std::log(x);
    case CoordMap::OnePlusExp:
      if (!(x >= 1.0)) throw DomainError("1 + exp map: value must be >= 1");
      // Start a boundary value slightly inside so the unconstrained coordinate is finite.
      return std::log(std::max(x - 1.0, 1e-6));
    case CoordMap::Tanh:
      if (!(std::abs(x) < 1.0)) throw DomainError("tanh map: value must lie in (-1, 1)");
      return std::atanh(x);
  }
  return x;
}

VectorXd Reparameterization::to_natural(const VectorXd& a) const {
  VectorXd x(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) x[k] = coord_map_eval(maps[k], a[k])[0];
  return x;
}

VectorXd Reparameterization::to_unconstrained(const VectorXd& x) const {
  VectorXd a(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) a[k] = coord_map_inverse(maps[k], x[k]);
  return a;
}

Evaluation Reparameterization::lift(const Evaluation& natural, const VectorXd& a) const {
  const Eigen::Index d = a.size();
  VectorXd m1(d), m2(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Vector3d e = coord_map_eval(maps[k], a[k]);
    m1[k] = e[1];
    m2[k] = e[2];
  }
  Evaluation out;
  out.value = natural.value;
  if (natural.gradient.size()) out.gradient = natural.gradient.cwiseProduct(m1);
  if (natural.hessian.size()) {
    out.hessian = m1.asDiagonal() * natural.hessian * m1.asDiagonal();
    out.hessian.diagonal() += natural.gradient.cwiseProduct(m2);
  }
  return out;
}

Objective chain_rule_lift(Objective natural, Reparameterization reparam) {
  return [natural = std::move(natural), reparam = std::move(reparam)](const VectorXd& a) {
    return reparam.lift(natural(reparam.to_natural(a)), a);
  };
}

}  // namespace semicomp
