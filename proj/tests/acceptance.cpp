// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero on any failure.
// Usage: acceptance [criterion ...]   (default: all of 1..10)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "semicomp/copula.hpp"
#include "semicomp/estimation.hpp"
#include "semicomp/inference.hpp"
#include "semicomp/likelihood.hpp"
#include "semicomp/simulation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace semicomp;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr std::uint64_t kSeed = 20240501;
constexpr Family kArchimedean[] = {Family::Clayton, Family::Frank, Family::Gumbel};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---- 1: copula partials ----

double interior_alpha(Family f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (f) {
    case Family::Clayton: return 0.3 + 5.0 * unif(rng);
    case Family::Frank: return (unif(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 8.0 * unif(rng));
    case Family::Gumbel: return 1.05 + 3.0 * unif(rng);
    default: return 0.0;
  }
}

double fd_partial(Family f, DerivIndex idx, double u, double v, double a) {
  const int var = idx.dalpha > 0 ? 2 : (idx.dv > 0 ? 1 : 0);
  DerivIndex parent = idx;
  (var == 0 ? parent.du : var == 1 ? parent.dv : parent.dalpha) -= 1;
  auto lower = [&](double t) {
    const double uu = var == 0 ? t : u;
    const double vv = var == 1 ? t : v;
    const double aa = var == 2 ? t : a;
    if (parent.order() == 0) return copula_cdf(f, uu, vv, aa);
    return copula_partial(f, parent, uu, vv, aa);
  };
  const double x = var == 0 ? u : var == 1 ? v : a;
  const double h = var == 2 ? 1e-2 : 0.2 * std::min({x, 1.0 - x, 0.05});
  return oracle::richardson(lower, x, h);
}

Outcome criterion1() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  double worst3 = 0.0, worst4 = 0.0;
  int checked = 0;
  for (Family f : kArchimedean) {
    for (int rep = 0; rep < 20; ++rep) {
      const double a = interior_alpha(f, rng);
      const double u = unif(rng), v = unif(rng);
      for (const DerivIndex& idx : supported_indices()) {
        const double e = oracle::rel_err(copula_partial(f, idx, u, v, a), fd_partial(f, idx, u, v, a));
        (idx.order() == 4 ? worst4 : worst3) = std::max(idx.order() == 4 ? worst4 : worst3, e);
        ++checked;
      }
    }
  }
  std::ostringstream s;
  s << checked << " partials; max rel err order<=3 " << worst3 << ", order 4 " << worst4;
  return {worst3 < 1e-6 && worst4 < 1e-4, s.str()};
}

// ---- 2: tau maps ----

Outcome criterion2() {
  const double gumbel = kendall_tau(Family::Gumbel, 2.5);
  double round_trip = 0.0;
  for (Family f : {Family::Clayton, Family::Frank, Family::Gumbel, Family::Gaussian}) {
    const double lo = (f == Family::Frank || f == Family::Gaussian) ? -0.9 : 0.01;
    for (double tau = lo; tau < 0.95; tau += 0.01) {
      if (std::abs(tau) < 1e-3) continue;
      const double a = tau_to_alpha(f, tau);
      round_trip = std::max(round_trip, std::abs(kendall_tau(f, a) - tau));
    }
  }
  auto integrand = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  double frank = 0.0;
  for (double a = -30.0; a <= 30.0; a += 0.37) {
    const double d = oracle::simpson(integrand, 0.0, a, 4000);
    frank = std::max(frank, std::abs(kendall_tau(Family::Frank, a) - (1.0 - 4.0 / a + 4.0 * d / (a * a))));
  }
  std::ostringstream s;
  s << "gumbel tau(2.5) - 0.6 = " << gumbel - 0.6 << "; round trip " << round_trip << "; frank vs quadrature "
    << frank;
  return {std::abs(gumbel - 0.6) < 1e-15 && round_trip < 1e-10 && frank < 1e-9, s.str()};
}

// ---- 3: score and information ----

VectorXd fd_steps(const FullLikelihood& lik, const ThetaFull& th) {
  VectorXd s = pack(th);
  const Index p = lik.data().p(), kt = lik.grid_t().size();
  const double a = th.theta1.alpha[0];
  switch (lik.copula().family) {
    case Family::Clayton: s[0] = 0.2 * a; break;
    case Family::Frank: s[0] = 0.1; break;
    case Family::Gumbel: s[0] = 0.2 * (a - 1.0); break;
    case Family::Gaussian: s[0] = 0.2 * (1.0 - std::abs(a)); break;
  }
  s.segment(1, p).setConstant(0.05);
  s.segment(1 + p, kt) = 0.25 * th.theta1.t.dr;
  s.segment(1 + p + kt, p).setConstant(0.05);
  s.tail(lik.grid_d().size()) = 0.25 * th.theta_d.dr;
  return s;
}

Outcome criterion3() {
  std::mt19937_64 rng(kSeed);
  double score = 0.0, info = 0.0;
  int fixtures = 0;
  for (Family f : {Family::Clayton, Family::Frank, Family::Gumbel, Family::Gaussian}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Dataset d = fixture::random_dataset(30, 2, kSeed + 10 * rep);
      const double eps = rep == 0 ? 1.0 / 30 : 0.0;
      FullLikelihood lik(d, {f, std::nullopt}, rep == 1 ? Transform::PO : Transform::PH,
                         rep == 2 ? Transform::PO : Transform::PH, eps, eps);
      const ThetaFull th = fixture::random_theta(lik, rng);
      const Index q = lik.n_alpha(), p = d.p(), kt = lik.grid_t().size();
      const VectorXd x = pack(th), steps = fd_steps(lik, th);
      auto value = [&](const VectorXd& v) { return lik.loglik(unpack_full(v, q, p, kt)); };
      auto grad = [&](const VectorXd& v) { return lik.score_full(unpack_full(v, q, p, kt)); };
      const VectorXd fd_score = 30.0 * oracle::gradient(value, x, steps);
      const MatrixXd fd_info = -oracle::jacobian(grad, x, steps) / 30.0;
      score = std::max({score, oracle::max_rel_err(lik.score_full(th), fd_score),
                        oracle::max_rel_err(lik.score_theta1(th), fd_score.head(lik.dim_theta1()))});
      info = std::max(info, oracle::max_rel_err(lik.info_full(th), fd_info));
      ++fixtures;
    }
  }
  std::ostringstream s;
  s << fixtures << " fixtures (n=30); max rel err score " << score << ", information " << info;
  return {score < 1e-6 && info < 1e-4, s.str()};
}

// ---- 4: Breslow ----

Dataset simulated(Family family, double tau, int n, std::uint64_t seed) {
  SimConfig c;
  c.family = family;
  c.tau = tau;
  c.n = n;
  c.seed = seed;
  return gen_dataset(c).data;
}

Outcome criterion4() {
  double worst = 0.0;
  bool converged = true;
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    const Dataset d = simulated(Family::Gumbel, 0.6, 200, kSeed + rep);
    const MarginFit fit = fit_stage1(d, Transform::PH, {}, VectorXd::Zero(d.p()));
    converged = converged && fit.diagnostics.converged;
    const EventGrid grid = make_grid(d.c, d.delta_d);
    for (Index l = 0; l < grid.size(); ++l) {
      double events = 0.0, at_risk = 0.0;
      for (Index i = 0; i < d.size(); ++i) {
        if (d.c[i] >= grid.times[l]) at_risk += 1.0;
        if (d.delta_d[i] && d.c[i] == grid.times[l]) events += 1.0;
      }
      worst = std::max(worst, std::abs(fit.theta.dr[l] - events / at_risk));
    }
  }
  std::ostringstream s;
  s << "max |jump - Nelson-Aalen| " << worst;
  return {converged && worst < 1e-8, s.str()};
}

// ---- 5: independence ----

Outcome criterion5() {
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = fixture::random_dataset(50, 2, kSeed + rep);
    const Transform gt = rep % 2 ? Transform::PO : Transform::PH;
    const Transform gd = rep % 3 ? Transform::PH : Transform::PO;
    FullLikelihood lik(d, {Family::Gumbel, std::nullopt}, gt, gd);
    ThetaFull th = fixture::random_theta(lik, rng);
    th.theta1.alpha[0] = 1.0;
    const double decoupled = MarginalLikelihood::nonterminal_naive(d, gt).loglik(th.theta1.t) +
                             MarginalLikelihood::terminal(d, gd).loglik(th.theta_d);
    worst = std::max(worst, std::abs(lik.loglik(th) - decoupled));
  }
  std::ostringstream s;
  s << "max |loglik - decoupled| " << worst;
  return {worst < 1e-10, s.str()};
}

// ---- 6: sandwich ----

bool psd(const MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m).eigenvalues().minCoeff() > -1e-10 * scale;
}

Outcome criterion6() {
  double worst = 0.0;
  int fits = 0, converged = 0, not_psd = 0;
  for (Family f : kArchimedean) {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      const int n = rep % 2 ? 50 : 40;
      const Dataset d = simulated(Family::Gumbel, 0.6, n, kSeed + 100 * rep);
      ModelSpec m;
      m.copula.family = f;
      m.g_t = m.g_d = rep == 3 ? Transform::PO : Transform::PH;
      const FitResult r = fit_pmle(d, m);
      const MarginFit s1 = fit_stage1(d, m.g_d, {});
      const FullLikelihood lik(d, m.copula, m.g_t, m.g_d, r.epsilon, r.epsilon);
      const MatrixXd c = sandwich_theta1(lik, r.theta, s1.influence, SandwichForm::Contraction);
      const MatrixXd mat = sandwich_theta1(lik, r.theta, s1.influence, SandwichForm::Materialized);
      worst = std::max(worst, (c - mat).cwiseAbs().maxCoeff() / std::max(1.0, c.cwiseAbs().maxCoeff()));
      ++fits;
      if (r.converged) {
        ++converged;
        if (!psd(r.sigma1)) ++not_psd;
      }
    }
  }
  // PSD at the desk-scale sample size as well.
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    ModelSpec m;
    const FitResult r = fit_pmle(simulated(Family::Gumbel, 0.6, 200, kSeed + 1000 + rep), m);
    if (!r.converged) continue;
    ++converged;
    if (!psd(r.sigma1)) ++not_psd;
  }
  std::ostringstream s;
  s << fits << " fixtures (n<=50); max scaled |contraction - materialized| " << worst << "; " << not_psd << " of "
    << converged << " converged fits not PSD";
  return {worst < 1e-12 && not_psd == 0, s.str()};
}

// ---- 7-10: Monte Carlo ----

const McRow& row(const McSummary& s, const std::string& target) {
  for (const McRow& r : s.rows)
    if (r.target == target) return r;
  throw std::runtime_error("missing target " + target);
}

bool within(double x, double centre, double halfwidth) { return std::abs(x - centre) <= halfwidth; }

SimConfig desk(double tau, int n, int reps) {
  SimConfig c;
  c.tau = tau;
  c.n = n;
  c.n_reps = reps;
  c.seed = kSeed;
  return c;
}

McSummary table1(double tau, Method method, std::vector<std::string> targets) {
  McOptions o;
  o.method = method;
  o.targets = std::move(targets);
  return run_mc(desk(tau, 200, 200), o);
}

std::string describe(const McSummary& s, const McRow& r) {
  std::ostringstream o;
  o << s.method << " " << r.target << ": bias " << r.bias << ", esd " << r.esd << ", ase " << r.ase << ", cp "
    << r.cp << " (" << s.n_converged << "/" << s.n_reps << " converged)";
  return o.str();
}

struct Criteria7to10 {
  std::optional<McSummary> tau06;
};

Outcome criterion7(Criteria7to10& cache) {
  if (!cache.tau06) cache.tau06 = table1(0.6, Method::PMLE, {"alpha", "surv_t@0.863"});
  const McRow& a = row(*cache.tau06, "alpha");
  return {within(a.bias, 0.026, 0.02) && within(a.esd, 0.083, 0.015) && a.cp >= 91.5 && a.cp <= 98.5,
          describe(*cache.tau06, a)};
}

Outcome criterion8() {
  const McSummary mle = table1(0.8, Method::MLE, {"alpha"});
  const McSummary pmle = table1(0.8, Method::PMLE, {"alpha"});
  const double bm = row(mle, "alpha").bias, bp = row(pmle, "alpha").bias;
  return {bm > bp && within(bm, 0.096, 0.03) && within(bp, 0.020, 0.02),
          describe(mle, row(mle, "alpha")) + "; " + describe(pmle, row(pmle, "alpha"))};
}

Outcome criterion9() {
  SimConfig c = desk(0.6, 400, 100);
  c.beta_t = {1.0, 0.5};
  McOptions o;
  o.targets = {"beta_t1", "beta_d1"};
  const McSummary gc = run_misspec(c, Family::Clayton, o);
  const McSummary gg = run_misspec(c, Family::Gumbel, o);
  int identical = 0;
  for (int r = 0; r < c.n_reps; ++r)
    if (gc.replications[r].theta_d.size() > 0 && gc.replications[r].theta_d == gg.replications[r].theta_d)
      ++identical;
  o.method = Method::MLE;
  const McSummary gc_mle = run_misspec(c, Family::Clayton, o);
  const double bm = row(gc_mle, "beta_t1").bias, bp = row(gc, "beta_t1").bias;
  std::ostringstream s;
  s << "beta_d identical in " << identical << "/" << c.n_reps << " replications; GC " << describe(gc_mle, row(gc_mle, "beta_t1"))
    << "; GC " << describe(gc, row(gc, "beta_t1"));
  return {identical == c.n_reps && within(bm, 0.195, 0.05) && within(bp, 0.078, 0.04), s.str()};
}

Outcome criterion10(Criteria7to10& cache) {
  if (!cache.tau06) cache.tau06 = table1(0.6, Method::PMLE, {"alpha", "surv_t@0.863"});
  const McRow& r = row(*cache.tau06, "surv_t@0.863");
  std::ostringstream s;
  s << "truth " << r.truth << "; " << describe(*cache.tau06, r);
  return {r.cp >= 91.0 && r.cp <= 98.5, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));
  if (wanted.empty())
    for (int k = 1; k <= 10; ++k) wanted.insert(k);

  Criteria7to10 cache;
  const std::function<Outcome()> criteria[] = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, [&] { return criterion7(cache); },
      criterion8, criterion9, [&] { return criterion10(cache); }};

  int failed = 0;
  for (int k = 1; k <= 10; ++k) {
    if (!wanted.count(k)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  [%.1f s] %s\n", k, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
