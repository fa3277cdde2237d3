#ifndef SEMICOMP_DATASET_HPP
#define SEMICOMP_DATASET_HPP

#include <Eigen/Dense>
#include <vector>

namespace semicomp {

/// Observed semi-competing-risks sample: X = T ^ C, C = D ^ A, event flags and covariates.
struct Dataset {
  Eigen::VectorXd x;
  Eigen::VectorXd c;
  Eigen::VectorXi delta_t;
  Eigen::VectorXi delta_d;
  Eigen::MatrixXd z;  // n x p
  Eigen::MatrixXd w;  // n x q copula covariates, empty unless alpha is linked

  Eigen::Index size() const { return x.size(); }
  Eigen::Index p() const { return z.cols(); }

  /// Throws DatasetError naming the first offending (1-based) row.
  void validate() const;
};

/// Distinct event times of one margin, with per-subject positions.
struct EventGrid {
  Eigen::VectorXd times;           // strictly increasing
  std::vector<int> count_le;       // per subject: grid times <= its observed time
  std::vector<int> event_index;    // per subject: grid slot of its event, -1 if censored
  Eigen::VectorXi events;          // number of events at each grid time

  Eigen::Index size() const { return times.size(); }
};

EventGrid make_grid(const Eigen::VectorXd& time, const Eigen::VectorXi& delta);

/// Largest follow-up time in the sample.
inline double follow_up_max(const Dataset& d) { return d.c.maxCoeff(); }

}  // namespace semicomp

#endif  // SEMICOMP_DATASET_HPP
