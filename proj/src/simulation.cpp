#include "semicomp/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "semicomp/errors.hpp"
#include "semicomp/inference.hpp"

namespace semicomp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t Rng::next() {
  const std::uint64_t out = splitmix64(state_);
  state_ += 0x9E3779B97F4A7C15ULL;
  return out;
}

double Rng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

void SimConfig::validate() const {
  if (n < 2) throw ConfigError("sim.n must be at least 2");
  if (n_reps < 1) throw ConfigError("sim.n_reps must be at least 1");
  if (!(censor_rate > 0.0 && censor_rate < 1.0)) throw ConfigError("sim.censor_rate must lie in (0, 1)");
  if (admin_time && !(*admin_time > 0.0)) throw ConfigError("sim.admin_time must be positive");
  if (!beta_t.allFinite() || !beta_d.allFinite()) throw ConfigError("sim betas must be finite");
  try {
    tau_to_alpha(family, tau);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sim.tau: ") + e.what());
  }
}

namespace {

constexpr double kTimeScale = 3.0;
constexpr int kPilotSize = 100000;
constexpr std::uint64_t kPilotSeed = 0x5EED0CA1B4A7E000ULL;

double normal_quantile(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

// Z1 ~ N(1, s^2) restricted to [0, 2] by rejection; Z2 ~ Bernoulli(0.8).
Eigen::Vector2d draw_covariates(Rng& rng, double z1_sd) {
  double z1;
  do {
    z1 = 1.0 + z1_sd * normal_quantile(rng.uniform());
  } while (z1 < 0.0 || z1 > 2.0);
  return {z1, rng.uniform() < 0.8 ? 1.0 : 0.0};
}

double z1_sd(const SimConfig& c) { return c.z1_half_is_variance ? std::sqrt(0.5) : 0.5; }

// log(T/3) = -beta'Z + log(-log u), so S(t | Z) = exp(-(t/3) e^{beta'Z}) and u = S(T | Z).
double event_time(const Eigen::Vector2d& beta, const Eigen::Vector2d& z, double u) {
  return kTimeScale * std::exp(-beta.dot(z)) * -std::log(u);
}

}  // namespace

double calibrate_admin_time(const SimConfig& config) {
  if (config.admin_time) return *config.admin_time;
  if (!(config.censor_rate > 0.0 && config.censor_rate < 1.0))
    throw ConfigError("censoring rate " + std::to_string(config.censor_rate) + " is unattainable");
  // D depends on the copula only through its uniform margin, so the pilot needs no pairing.
  Rng rng(kPilotSeed);
  std::vector<double> d(kPilotSize);
  const double sd = z1_sd(config);
  for (double& v : d) {
    const Eigen::Vector2d z = draw_covariates(rng, sd);
    v = event_time(config.beta_d, z, rng.uniform());
  }
  // The empirical censoring fraction #{D > A}/N is a step function of A; its root is an order statistic.
  const auto k = static_cast<std::size_t>(std::floor((1.0 - config.censor_rate) * kPilotSize));
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  return d[k];
}

LatentSample gen_latent(const SimConfig& config, std::uint64_t seed, int n) {
  const double alpha = tau_to_alpha(config.family, config.tau);
  const double sd = z1_sd(config);
  Rng rng(seed);
  LatentSample s{VectorXd(n), VectorXd(n), MatrixXd(n, 2)};
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d z = draw_covariates(rng, sd);
    const double u_t = rng.uniform();
    const double u_d = conditional_sample(config.family, alpha, u_t, rng.uniform());
    s.z.row(i) = z.transpose();
    s.t[i] = event_time(config.beta_t, z, u_t);
    s.d[i] = event_time(config.beta_d, z, std::clamp(u_d, 1e-300, 1.0 - 1e-16));
  }
  return s;
}

SimData gen_dataset(const SimConfig& config, std::uint64_t seed, double admin_time) {
  const LatentSample s = gen_latent(config, seed, config.n);
  SimData out;
  Dataset& d = out.data;
  const int n = config.n;
  d.x.resize(n);
  d.c.resize(n);
  d.delta_t.resize(n);
  d.delta_d.resize(n);
  d.z = s.z;
  for (int i = 0; i < n; ++i) {
    const double c = std::min(s.d[i], admin_time);
    d.c[i] = c;
    d.delta_d[i] = s.d[i] <= admin_time ? 1 : 0;
    d.delta_t[i] = s.t[i] <= c ? 1 : 0;
    d.x[i] = std::min(s.t[i], c);
  }
  SimTruth& t = out.truth;
  t.family = config.family;
  t.alpha = tau_to_alpha(config.family, config.tau);
  t.tau = config.tau;
  t.beta_t = config.beta_t;
  t.beta_d = config.beta_d;
  t.admin_time = admin_time;
  t.seed = seed;
  t.censor_rate_t = 1.0 - d.delta_t.cast<double>().mean();
  t.censor_rate_d = 1.0 - d.delta_d.cast<double>().mean();
  return out;
}

SimData gen_dataset(const SimConfig& config) {
  config.validate();
  return gen_dataset(config, config.seed, calibrate_admin_time(config));
}

McTarget resolve_target(const std::string& name, const SimConfig& config) {
  if (name == "alpha") return {name, tau_to_alpha(config.family, config.tau)};
  if (name == "tau") return {name, config.tau};
  if (name == "beta_t1") return {name, config.beta_t[0]};
  if (name == "beta_t2") return {name, config.beta_t[1]};
  if (name == "beta_d1") return {name, config.beta_d[0]};
  if (name == "beta_d2") return {name, config.beta_d[1]};
  if (name.rfind("surv_t@", 0) == 0) {
    char* end = nullptr;
    const std::string num = name.substr(7);
    const double t = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0' || !(t > 0.0)) throw ConfigError("bad survival target '" + name + "'");
    return {name, std::exp(-SimTruth::baseline(t))};
  }
  throw ConfigError("unknown target '" + name + "'");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SEMICOMP_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Estimate, standard error and interval of one target from a fit.
Interval target_interval(const FitResult& fit, const std::string& name, double level) {
  const Index n_alpha = fit.theta.theta1.alpha.size();
  const Index d1 = fit.dim_theta1();
  const auto coordinate = [&](Index k) {
    const double z = normal_critical(level);
    const double est = pack(fit.theta)[k];
    return Interval{est, fit.se[k], est - z * fit.se[k], est + z * fit.se[k], false};
  };
  if (name == "alpha") return ci_alpha(fit, level);
  if (name == "tau") return tau_ci(fit, level);
  if (name == "beta_t1") return coordinate(n_alpha);
  if (name == "beta_t2") return coordinate(n_alpha + 1);
  if (name == "beta_d1") return coordinate(d1);
  if (name == "beta_d2") return coordinate(d1 + 1);
  return ci_baseline_survival(fit, std::strtod(name.substr(7).c_str(), nullptr), level);
}

}  // namespace

McSummary run_mc(const SimConfig& config, const McOptions& options) {
  config.validate();
  const double admin = calibrate_admin_time(config);
  std::vector<McTarget> targets;
  for (const std::string& name : options.targets) targets.push_back(resolve_target(name, config));
  const Index nt = static_cast<Index>(targets.size());

  ModelSpec model = options.model;
  model.copula.family = options.fit_family.value_or(config.family);
  if (model.copula.link) throw ConfigError("simulated data carry no copula covariates; drop model.link");

  McSummary out;
  out.method = method_name(options.method);
  out.true_family = family_name(config.family);
  out.fit_family = family_name(model.copula.family);
  out.n_reps = config.n_reps;
  out.admin_time = admin;
  out.replications.resize(config.n_reps);

  std::atomic<int> next{0};
  const auto work = [&]() {
    for (int r = next++; r < config.n_reps; r = next++) {
      Replication& rep = out.replications[r];
      rep.estimate = VectorXd::Constant(nt, NAN);
      rep.se = VectorXd::Constant(nt, NAN);
      rep.covered = Eigen::VectorXi::Zero(nt);
      const SimData sim = gen_dataset(config, stream_seed(config.seed, static_cast<std::uint64_t>(r)), admin);
      rep.censor_rate_t = sim.truth.censor_rate_t;
      rep.censor_rate_d = sim.truth.censor_rate_d;
      try {
        const FitResult fit = semicomp::fit(sim.data, model, options.method, options.fit);
        rep.converged = fit.converged;
        rep.theta_d = pack(fit.theta.theta_d);
        for (Index k = 0; k < nt; ++k) {
          try {
            const Interval ci = target_interval(fit, targets[k].name, options.level);
            rep.estimate[k] = ci.estimate;
            rep.se[k] = ci.se;
            rep.covered[k] = ci.lo <= targets[k].truth && targets[k].truth <= ci.hi ? 1 : 0;
          } catch (const DomainError&) {
            // Target outside this sample's support (e.g. time beyond follow-up): left missing.
          }
        }
      } catch (const std::exception& e) {
        rep.converged = false;
        rep.error = e.what();
      }
    }
  };
  const int workers = std::min(resolve_workers(options.workers), config.n_reps);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  // Reduction in replication order.
  for (const Replication& rep : out.replications) {
    out.censor_rate_t += rep.censor_rate_t / config.n_reps;
    out.censor_rate_d += rep.censor_rate_d / config.n_reps;
    if (rep.converged) ++out.n_converged;
  }
  for (Index k = 0; k < nt; ++k) {
    const McTarget& tg = targets[k];
    McRow row;
    row.target = tg.name;
    row.truth = tg.truth;
    row.relative = !options.absolute && tg.truth != 0.0;
    double sum = 0.0, sum_se = 0.0, sum_sq = 0.0;
    int used = 0, covered = 0;
    for (const Replication& rep : out.replications) {
      if (!rep.converged || !std::isfinite(rep.estimate[k])) continue;
      ++used;
      sum += rep.estimate[k];
      sum_se += rep.se[k];
      sum_sq += (rep.estimate[k] - tg.truth) * (rep.estimate[k] - tg.truth);
      covered += rep.covered[k];
    }
    row.n_used = used;
    if (used > 0) {
      const double mean = sum / used;
      double var = 0.0;
      for (const Replication& rep : out.replications)
        if (rep.converged && std::isfinite(rep.estimate[k])) var += (rep.estimate[k] - mean) * (rep.estimate[k] - mean);
      var /= used;
      const double scale = row.relative ? std::abs(tg.truth) : 1.0;
      row.bias = std::abs(mean - tg.truth) / scale;
      row.esd = std::sqrt(var) / scale;
      row.ase = sum_se / used / scale;
      row.rmse = std::sqrt(sum_sq / used) / scale;
      row.cp = 100.0 * covered / used;
    }
    out.rows.push_back(row);
  }
  return out;
}

McSummary run_misspec(const SimConfig& config, Family fit_family, McOptions options) {
  options.fit_family = fit_family;
  options.absolute = true;
  if (options.targets == std::vector<std::string>{"alpha"})
    options.targets = {"beta_t1", "beta_t2", "beta_d1", "beta_d2"};
  return run_mc(config, options);
}

}  // namespace semicomp
