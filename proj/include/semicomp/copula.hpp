#ifndef SEMICOMP_COPULA_HPP
#define SEMICOMP_COPULA_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>

#include "semicomp/jet.hpp"

namespace semicomp {

enum class Family { Clayton, Frank, Gumbel, Gaussian };

std::string family_name(Family family);
/// Case-insensitive; throws DomainError on unknown names.
Family parse_family(std::string_view name);

/// Parameter domains: Clayton (0, inf) (negative branch rejected), Frank R\{0},
/// Gumbel [1, inf), Gaussian (-1, 1).
bool in_domain(Family family, double alpha);
void check_domain(Family family, double alpha);

/// Orders of differentiation in (u_T, u_D, alpha).
struct DerivIndex {
  int du = 0;
  int dv = 0;
  int dalpha = 0;
  int order() const { return du + dv + dalpha; }
  friend bool operator==(const DerivIndex&, const DerivIndex&) = default;
};

/// The multi-indices served by copula_partial: every partial used by the score
/// vectors and information matrices of the semi-competing-risks likelihood.
const std::array<DerivIndex, 24>& supported_indices();
bool is_supported(const DerivIndex& idx);

/// Table of all mixed partials of C(u_T, u_D; alpha) with total order <= 4.
class CopulaDerivatives {
 public:
  double operator()(int du, int dv, int dalpha) const {
    return values_[jet_detail::kIndex[du][dv][dalpha]];
  }
  double& operator()(int du, int dv, int dalpha) {
    return values_[jet_detail::kIndex[du][dv][dalpha]];
  }

 private:
  std::array<double, jet_detail::kSize> values_{};
};

/// Lower clamp applied to u values inside derivative evaluation (never to data).
inline constexpr double kUClamp = 1e-12;

/// C(u_T, u_D; alpha) for u in [0, 1]^2.
double copula_cdf(Family family, double u_t, double u_d, double alpha);

/// One supported partial. Boundary u values are clamped like copula_derivatives.
double copula_partial(Family family, DerivIndex idx, double u_t, double u_d, double alpha);

/// All partials up to total order 4 in one pass; u values are clamped to
/// [kUClamp, 1 - kUClamp]. Used by the likelihood.
CopulaDerivatives copula_derivatives(Family family, double u_t, double u_d, double alpha);

/// dC/du_T, the conditional distribution of U_D given U_T = u_t.
double conditional_cdf(Family family, double alpha, double u_t, double u_d);

/// Inverse of conditional_cdf in its last argument: the u_D with dC/du_T = v.
double conditional_sample(Family family, double alpha, double u_t, double v);

double kendall_tau(Family family, double alpha);
/// d tau / d alpha.
double kendall_tau_derivative(Family family, double alpha);
double tau_to_alpha(Family family, double tau);

/// Integral of t / (e^t - 1) over [0, x] (signed for negative x).
double debye_integral(double x);

enum class Link { Identity, Log, LogitScaled };

std::string link_name(Link link);
Link parse_link(std::string_view name);

/// phi(eta), phi'(eta), phi''(eta). LogitScaled maps R onto (-1, 1) via 2/(1+e^-eta) - 1.
std::array<double, 3> link_derivatives(Link link, double eta);

struct LinkedAlpha {
  double alpha;
  Eigen::VectorXd gradient;  // d alpha / d gamma
};

/// alpha = phi(gamma' w) with its gradient in gamma; DomainError when the image
/// leaves the family's parameter domain.
LinkedAlpha alpha_from_link(Family family, const Eigen::VectorXd& gamma, const Eigen::VectorXd& w,
                            Link link);

}  // namespace semicomp

#endif  // SEMICOMP_COPULA_HPP
