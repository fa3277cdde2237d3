#ifndef SEMICOMP_TESTS_FIXTURES_HPP
#define SEMICOMP_TESTS_FIXTURES_HPP

#include <random>

#include "semicomp/copula.hpp"
#include "semicomp/dataset.hpp"
#include "semicomp/likelihood.hpp"

namespace fixture {

/// Small synthetic sample with mixed event patterns (not drawn from any particular model).
inline semicomp::Dataset random_dataset(int n, int p, std::uint64_t seed, int q = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);
  semicomp::Dataset d;
  d.x.resize(n);
  d.c.resize(n);
  d.delta_t.resize(n);
  d.delta_d.resize(n);
  d.z.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const double c = 0.3 + 2.5 * unif(rng);
    const double t = 2.0 * unif(rng);
    d.c[i] = c;
    d.x[i] = std::min(t, c);
    d.delta_t[i] = t <= c ? 1 : 0;
    d.delta_d[i] = unif(rng) < 0.6 ? 1 : 0;
    for (int k = 0; k < p; ++k) d.z(i, k) = k == 1 ? (unif(rng) < 0.7 ? 1.0 : 0.0) : norm(rng);
  }
  if (q > 0) {
    d.w = Eigen::MatrixXd::Zero(n, q);
    for (int i = 0; i < n; ++i) d.w(i, i % q) = 1.0;
  }
  return d;
}

inline double random_alpha(semicomp::Family f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (f) {
    case semicomp::Family::Clayton: return 0.5 + 3.5 * unif(rng);
    case semicomp::Family::Frank: return (unif(rng) < 0.3 ? -1.0 : 1.0) * (1.0 + 7.0 * unif(rng));
    case semicomp::Family::Gumbel: return 1.1 + 2.0 * unif(rng);
    case semicomp::Family::Gaussian: return -0.6 + 1.3 * unif(rng);
  }
  return 0.0;
}

inline semicomp::MarginParams random_margin(Eigen::Index p, Eigen::Index kappa, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  semicomp::MarginParams m;
  m.beta.resize(p);
  for (Eigen::Index k = 0; k < p; ++k) m.beta[k] = -0.5 + unif(rng);
  m.dr.resize(kappa);
  for (Eigen::Index l = 0; l < kappa; ++l) m.dr[l] = (0.4 + unif(rng)) / static_cast<double>(kappa);
  return m;
}

inline semicomp::ThetaFull random_theta(const semicomp::FullLikelihood& lik, std::mt19937_64& rng) {
  semicomp::ThetaFull th;
  const Eigen::Index p = lik.data().p();
  th.theta1.alpha.resize(lik.n_alpha());
  if (lik.copula().link) {
    std::uniform_real_distribution<double> unif(-0.5, 0.8);
    for (Eigen::Index k = 0; k < th.theta1.alpha.size(); ++k) th.theta1.alpha[k] = unif(rng);
  } else {
    th.theta1.alpha[0] = random_alpha(lik.copula().family, rng);
  }
  th.theta1.t = random_margin(p, lik.grid_t().size(), rng);
  th.theta_d = random_margin(p, lik.grid_d().size(), rng);
  return th;
}

}  // namespace fixture

#endif  // SEMICOMP_TESTS_FIXTURES_HPP
