#include <cmath>

#include "doctest.h"
#include "semicomp/errors.hpp"
#include "semicomp/likelihood.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace semicomp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr Family kFamilies[] = {Family::Clayton, Family::Frank, Family::Gumbel, Family::Gaussian};

double alpha_step(const FullLikelihood& lik, double a) {
  if (lik.copula().link) return 0.05;
  switch (lik.copula().family) {
    case Family::Clayton: return 0.2 * a;
    case Family::Frank: return 0.1;
    case Family::Gumbel: return 0.2 * (a - 1.0);
    case Family::Gaussian: return 0.2 * (1.0 - std::abs(a));
  }
  return 0.0;
}

VectorXd steps_for(const FullLikelihood& lik, const ThetaFull& th) {
  VectorXd s = pack(th);
  const Eigen::Index q = lik.n_alpha(), p = lik.data().p(), kt = lik.grid_t().size();
  for (Eigen::Index k = 0; k < q; ++k) s[k] = alpha_step(lik, th.theta1.alpha[k]);
  s.segment(q, p).setConstant(0.05);
  s.segment(q + p, kt) = 0.25 * th.theta1.t.dr;
  s.segment(q + p + kt, p).setConstant(0.05);
  s.tail(lik.grid_d().size()) = 0.25 * th.theta_d.dr;
  return s;
}

// Loglik assembled from copula_cdf / copula_partial and marginal_survival, subject by subject.
double loglik_oracle(const FullLikelihood& lik, const ThetaFull& th) {
  const Dataset& d = lik.data();
  // The shift epsilon adds to the cumulative hazard, i.e. scales survival by e^-epsilon.
  MarginalModel mt{th.theta1.t.beta, {lik.grid_t().times, th.theta1.t.dr}, lik.g_t()};
  MarginalModel md{th.theta_d.beta, {lik.grid_d().times, th.theta_d.dr}, lik.g_d()};
  const double a = th.theta1.alpha[0];
  const Family f = lik.copula().family;
  double total = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const VectorXd z = d.z.row(i).transpose();
    const double ut = std::exp(-lik.epsilon_t()) * marginal_survival(mt, d.x[i], z);
    const double ud = std::exp(-lik.epsilon_d()) * marginal_survival(md, d.c[i], z);
    double cop;
    if (d.delta_t[i] && d.delta_d[i])
      cop = copula_partial(f, {1, 1, 0}, ut, ud, a);
    else if (d.delta_t[i])
      cop = copula_partial(f, {1, 0, 0}, ut, ud, a);
    else if (d.delta_d[i])
      cop = copula_partial(f, {0, 1, 0}, ut, ud, a);
    else
      cop = copula_cdf(f, ut, ud, a);
    total += std::log(cop);
    auto log_density = [&](const MarginalModel& m, double t, double u, int idx) {
      const double e = std::exp(m.beta.dot(z));
      const double lam = m.baseline(t) * e;
      return std::log(u) + std::log(g_deriv(m.transform, lam, 1)) + std::log(e) + std::log(m.baseline.jumps[idx]);
    };
    if (d.delta_t[i]) total += log_density(mt, d.x[i], ut, lik.grid_t().event_index[i]);
    if (d.delta_d[i]) total += log_density(md, d.c[i], ud, lik.grid_d().event_index[i]);
  }
  return total / d.size();
}

struct Errors {
  double score = 0, info = 0;
};

Errors derivative_errors(const FullLikelihood& lik, const ThetaFull& th) {
  const Eigen::Index q = lik.n_alpha(), p = lik.data().p(), kt = lik.grid_t().size();
  const double n = static_cast<double>(lik.data().size());
  const VectorXd x = pack(th);
  const VectorXd steps = steps_for(lik, th);
  auto value = [&](const VectorXd& v) { return lik.loglik(unpack_full(v, q, p, kt)); };
  auto grad = [&](const VectorXd& v) { return lik.score_full(unpack_full(v, q, p, kt)); };
  const VectorXd fd_score = n * oracle::gradient(value, x, steps);
  const MatrixXd fd_info = -oracle::jacobian(grad, x, steps) / n;
  Errors e;
  e.score = oracle::max_rel_err(lik.score_full(th), fd_score);
  e.info = oracle::max_rel_err(lik.info_full(th), fd_info);
  return e;
}

}  // namespace

TEST_CASE("full score and information match finite differences") {
  std::mt19937_64 rng(101);
  for (Family f : kFamilies) {
    for (int rep = 0; rep < 3; ++rep) {
      const Dataset d = fixture::random_dataset(30, 2, 1000 + rep);
      const Transform gt = rep == 1 ? Transform::PO : Transform::PH;
      const Transform gd = rep == 2 ? Transform::PO : Transform::PH;
      FullLikelihood lik(d, {f, std::nullopt}, gt, gd, rep == 0 ? 1.0 / 30 : 0.0, rep == 0 ? 1.0 / 30 : 0.0);
      const ThetaFull th = fixture::random_theta(lik, rng);
      const Errors e = derivative_errors(lik, th);
      INFO(family_name(f) << " rep " << rep << " alpha " << th.theta1.alpha[0]);
      CHECK(e.score < 1e-6);
      CHECK(e.info < 1e-4);
    }
  }
}

TEST_CASE("linked copula parameter derivatives") {
  std::mt19937_64 rng(102);
  const Dataset d = fixture::random_dataset(30, 2, 77, 3);
  for (auto [f, link] : {std::pair{Family::Clayton, Link::Log}, std::pair{Family::Frank, Link::Identity},
                         std::pair{Family::Gaussian, Link::LogitScaled}}) {
    FullLikelihood lik(d, {f, link}, Transform::PH, Transform::PH);
    ThetaFull th = fixture::random_theta(lik, rng);
    if (f == Family::Frank) th.theta1.alpha = Eigen::Vector3d(2.0, -3.0, 4.0);
    const Errors e = derivative_errors(lik, th);
    INFO(family_name(f));
    CHECK(e.score < 1e-6);
    CHECK(e.info < 1e-4);
  }
}

TEST_CASE("theta1 pieces are sub-blocks of the full quantities") {
  std::mt19937_64 rng(103);
  const Dataset d = fixture::random_dataset(30, 2, 5);
  FullLikelihood lik(d, {Family::Gumbel, std::nullopt}, Transform::PH, Transform::PH);
  const ThetaFull th = fixture::random_theta(lik, rng);
  const Eigen::Index d1 = lik.dim_theta1();
  CHECK(lik.dim_full() == 2 * 2 + lik.grid_t().size() + lik.grid_d().size() + 1);
  CHECK(lik.score_full(th).size() == lik.dim_full());
  CHECK((lik.info_theta1(th) - lik.info_full(th).topLeftCorner(d1, d1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lik.score_theta1(th) - lik.score_full(th).head(d1)).cwiseAbs().maxCoeff() < 1e-12);
  const MatrixXd info = lik.info_full(th);
  CHECK((info - info.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // Subject scores sum to the total score.
  CHECK((lik.subject_scores(th, FullLikelihood::Block::Full).colwise().sum().transpose() - lik.score_full(th))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("cross derivative in U_D matches finite differences") {
  std::mt19937_64 rng(104);
  for (Family f : kFamilies) {
    const Dataset d = fixture::random_dataset(20, 2, 9);
    FullLikelihood lik(d, {f, std::nullopt}, Transform::PH, Transform::PO);
    const ThetaFull th = fixture::random_theta(lik, rng);
    const MatrixXd cross = lik.cross_theta1_uD(th);
    CHECK(cross.cols() == lik.dim_theta1());
    const VectorXd ud = lik.u_d(th);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (ud[i] > 1.0 - 1e-6) continue;
      const double h = 0.2 * std::min(ud[i], 1.0 - ud[i]);
      VectorXd fd = oracle::jacobian(
          [&](const VectorXd& u) { return lik.subject_score_theta1(th, i, u[0]); }, VectorXd::Constant(1, ud[i]),
          VectorXd::Constant(1, h));
      INFO(family_name(f) << " subject " << i);
      CHECK(oracle::max_rel_err(cross.row(i).transpose(), fd) < 1e-5);
    }
  }
}

TEST_CASE("second implementation of the log-likelihood") {
  std::mt19937_64 rng(105);
  for (Family f : kFamilies) {
    for (int rep = 0; rep < 3; ++rep) {
      const Dataset d = fixture::random_dataset(30, 2, 300 + rep);
      FullLikelihood lik(d, {f, std::nullopt}, rep == 1 ? Transform::PO : Transform::PH, Transform::PH, 0.02, 0.02);
      ThetaFull th = fixture::random_theta(lik, rng);
      if (f == Family::Clayton && rep == 0) th.theta1.alpha[0] = 2.0;
      CHECK(std::abs(lik.loglik(th) - loglik_oracle(lik, th)) < 1e-12);
    }
  }
}

TEST_CASE("independence factorises the likelihood") {
  std::mt19937_64 rng(106);
  for (int rep = 0; rep < 5; ++rep) {
    const Dataset d = fixture::random_dataset(40, 2, 500 + rep);
    const Transform gt = rep % 2 ? Transform::PO : Transform::PH;
    FullLikelihood lik(d, {Family::Gumbel, std::nullopt}, gt, Transform::PH);
    ThetaFull th = fixture::random_theta(lik, rng);
    th.theta1.alpha[0] = 1.0;
    const MarginalLikelihood mt = MarginalLikelihood::nonterminal_naive(d, gt);
    const MarginalLikelihood md = MarginalLikelihood::terminal(d, Transform::PH);
    CHECK(std::abs(lik.loglik(th) - (mt.loglik(th.theta1.t) + md.loglik(th.theta_d))) < 1e-10);

    const Eigen::Index p = d.p(), d1 = lik.dim_theta1();
    const MatrixXd info = lik.info_full(th);
    CHECK(info.block(1, d1, p, p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(info.block(1 + p, d1 + p, lik.grid_t().size(), lik.grid_d().size()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((info.bottomRightCorner(lik.dim_theta_d(), lik.dim_theta_d()) - md.information(th.theta_d))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((lik.score_full(th).tail(lik.dim_theta_d()) - md.score(th.theta_d)).cwiseAbs().maxCoeff() < 1e-9);
    // T-score under independence is the naive marginal score.
    CHECK((lik.score_theta1(th).tail(lik.dim_theta1() - 1) - mt.score(th.theta1.t)).cwiseAbs().maxCoeff() < 1e-9);
    // Only the copula-parameter column survives: d^2 log C / du_T du_D vanishes for C = uv,
    // while dC/dalpha at the Gumbel boundary alpha = 1 does not.
    const MatrixXd cross = lik.cross_theta1_uD(th);
    CHECK(cross.rightCols(cross.cols() - 1).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fully censored subject contributes log C only") {
  Dataset d;
  d.x = Eigen::Vector2d(0.5, 1.0);
  d.c = Eigen::Vector2d(1.0, 1.0);
  d.delta_t = Eigen::Vector2i(1, 0);
  d.delta_d = Eigen::Vector2i(1, 0);
  d.z = MatrixXd::Zero(2, 1);
  FullLikelihood lik(d, {Family::Clayton, std::nullopt}, Transform::PH, Transform::PH);
  ThetaFull th{{VectorXd::Constant(1, 2.0), {VectorXd::Zero(1), VectorXd::Constant(1, 0.4)}},
               {VectorXd::Zero(1), VectorXd::Constant(1, 0.7)}};
  const double ut = std::exp(-0.4), ud = std::exp(-0.7);
  const double second = std::log(copula_cdf(Family::Clayton, ut, ud, 2.0));
  // f_T = U_T * 0.4 and f_D = U_D * 0.7 for PH with beta = 0.
  const double want = 0.5 * (std::log(copula_partial(Family::Clayton, {1, 1, 0}, ut, ud, 2.0)) + std::log(ut * 0.4) +
                             std::log(ud * 0.7) + second);
  CHECK(lik.loglik(th) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("invalid parameters are rejected") {
  const Dataset d = fixture::random_dataset(10, 1, 3);
  FullLikelihood lik(d, {Family::Gumbel, std::nullopt}, Transform::PH, Transform::PH);
  std::mt19937_64 rng(1);
  ThetaFull th = fixture::random_theta(lik, rng);
  th.theta1.t.dr[0] = 0.0;
  CHECK_THROWS_AS(lik.loglik(th), DomainError);
  th = fixture::random_theta(lik, rng);
  th.theta1.alpha[0] = 0.5;
  CHECK_THROWS_AS(lik.loglik(th), DomainError);
}

TEST_CASE("stage-1 likelihood") {
  SUBCASE("one event, PH, beta = 0") {
    MarginalLikelihood m(VectorXd::Constant(1, 1.0), Eigen::VectorXi::Constant(1, 1), MatrixXd::Zero(1, 1),
                         Transform::PH);
    for (double lam : {0.3, 1.0, 2.5})
      CHECK(m.loglik({VectorXd::Zero(1), VectorXd::Constant(1, lam)}) == doctest::Approx(std::log(lam) - lam));
    CHECK(std::abs(m.score({VectorXd::Zero(1), VectorXd::Constant(1, 1.0)})[1]) < 1e-15);
    // d/dbeta of the single-term likelihood is Z (1 - Lambda).
    MarginalLikelihood mz(VectorXd::Constant(1, 1.0), Eigen::VectorXi::Constant(1, 1), MatrixXd::Constant(1, 1, 0.7),
                          Transform::PH);
    const MarginParams th{VectorXd::Constant(1, 0.3), VectorXd::Constant(1, 0.8)};
    const double lam = 0.8 * std::exp(0.3 * 0.7);
    CHECK(mz.score(th)[0] == doctest::Approx(0.7 * (1.0 - lam)).epsilon(1e-14));
  }
  SUBCASE("Breslow jumps are stationary") {
    const Dataset d = fixture::random_dataset(50, 2, 17);
    const MarginalLikelihood m = MarginalLikelihood::terminal(d, Transform::PH);
    const EventGrid& g = m.grid();
    VectorXd dr(g.size());
    for (Eigen::Index l = 0; l < g.size(); ++l) {
      int at_risk = 0;
      for (Eigen::Index i = 0; i < d.size(); ++i) at_risk += d.c[i] >= g.times[l];
      dr[l] = static_cast<double>(g.events[l]) / at_risk;
    }
    const VectorXd s = m.score({VectorXd::Zero(2), dr});
    CHECK(s.tail(g.size()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("value, score and information against oracles") {
    std::mt19937_64 rng(7);
    for (Transform g : {Transform::PH, Transform::PO}) {
      const Dataset d = fixture::random_dataset(40, 2, 21);
      const MarginalLikelihood m = MarginalLikelihood::terminal(d, g);
      const MarginParams th = fixture::random_margin(2, m.grid().size(), rng);
      // Plain per-subject sum.
      double total = 0.0;
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double e = std::exp(d.z.row(i).dot(th.beta));
        double r = 0.0;
        for (Eigen::Index l = 0; l < m.grid().size(); ++l)
          if (m.grid().times[l] <= d.c[i]) r += th.dr[l];
        const auto gd = g_derivs(g, r * e);
        total -= gd[0];
        if (d.delta_d[i]) {
          Eigen::Index l = 0;
          while (m.grid().times[l] != d.c[i]) ++l;
          total += std::log(th.dr[l]) + std::log(e) + std::log(gd[1]);
        }
      }
      CHECK(std::abs(m.loglik(th) - total / d.size()) < 1e-12);

      const VectorXd x = pack(th);
      VectorXd steps = x;
      steps.head(2).setConstant(0.05);
      steps.tail(m.grid().size()) *= 0.25;
      auto value = [&](const VectorXd& v) { return m.loglik(unpack_margin(v, 2)); };
      auto grad = [&](const VectorXd& v) { return m.score(unpack_margin(v, 2)); };
      const double n = static_cast<double>(d.size());
      CHECK(oracle::max_rel_err(m.score(th), n * oracle::gradient(value, x, steps)) < 1e-6);
      CHECK(oracle::max_rel_err(m.information(th), -oracle::jacobian(grad, x, steps) / n) < 1e-6);
      CHECK((m.subject_scores(th).colwise().sum().transpose() - m.score(th)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}
