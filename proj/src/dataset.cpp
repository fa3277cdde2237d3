#include "semicomp/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "semicomp/errors.hpp"

namespace semicomp {

void Dataset::validate() const {
  const Eigen::Index n = size();
  if (n == 0) throw DatasetError(0, "dataset is empty");
  if (c.size() != n || delta_t.size() != n || delta_d.size() != n || z.rows() != n)
    throw DatasetError(0, "column lengths differ");
  if (w.size() > 0 && w.rows() != n) throw DatasetError(0, "copula covariate rows differ");
  for (Eigen::Index i = 0; i < n; ++i) {
    const long row = static_cast<long>(i) + 1;
    if (!std::isfinite(x[i]) || !(x[i] > 0.0)) throw DatasetError(row, "x must be positive and finite");
    if (!std::isfinite(c[i]) || !(c[i] > 0.0)) throw DatasetError(row, "c must be positive and finite");
    if (delta_t[i] != 0 && delta_t[i] != 1) throw DatasetError(row, "delta_t must be 0 or 1");
    if (delta_d[i] != 0 && delta_d[i] != 1) throw DatasetError(row, "delta_d must be 0 or 1");
    if (x[i] > c[i]) throw DatasetError(row, "x exceeds c");
    if (delta_t[i] == 0 && x[i] != c[i]) throw DatasetError(row, "censored non-terminal time must equal c");
    if (!z.row(i).allFinite()) throw DatasetError(row, "non-finite covariate");
    if (w.size() > 0 && !w.row(i).allFinite()) throw DatasetError(row, "non-finite copula covariate");
  }
}

EventGrid make_grid(const Eigen::VectorXd& time, const Eigen::VectorXi& delta) {
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < time.size(); ++i)
    if (delta[i] == 1) ev.push_back(time[i]);
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());

  EventGrid g;
  g.times = Eigen::Map<Eigen::VectorXd>(ev.data(), static_cast<Eigen::Index>(ev.size()));
  g.events = Eigen::VectorXi::Zero(g.size());
  g.count_le.resize(time.size());
  g.event_index.assign(time.size(), -1);
  for (Eigen::Index i = 0; i < time.size(); ++i) {
    const auto pos = std::upper_bound(ev.begin(), ev.end(), time[i]) - ev.begin();
    g.count_le[i] = static_cast<int>(pos);
    if (delta[i] == 1) {
      g.event_index[i] = static_cast<int>(pos) - 1;
      ++g.events[pos - 1];
    }
  }
  return g;
}

}  // namespace semicomp
