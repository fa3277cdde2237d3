#ifndef SEMICOMP_IO_HPP
#define SEMICOMP_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "semicomp/dataset.hpp"
#include "semicomp/estimation.hpp"
#include "semicomp/simulation.hpp"

namespace semicomp {

/// Dataset file: comma-separated with a header naming x, c, delta_t, delta_d, z1..zp
/// and optionally w1..wq, in any column order. Errors are DatasetError with the
/// offending file line (header = line 1) and column in the message.
Dataset read_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset read_dataset(const std::string& path);
void write_dataset(std::ostream& out, const Dataset& d);
void write_dataset(const std::string& path, const Dataset& d);

struct ReportSpec {
  /// Monte Carlo targets (see resolve_target).
  std::vector<std::string> targets{"alpha"};
  /// Times for the baseline survival table of a fit.
  std::vector<double> survival_times;
  double level = 0.95;
  std::optional<std::string> output;
};

struct RunConfig {
  ModelSpec model;
  FitOptions fit;
  SimConfig sim;
  ReportSpec report;
};

/// Parses and validates a configuration document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the key path.
RunConfig parse_config(const nlohmann::json& doc);
/// Reads a file; JSON syntax errors are reported with line and column.
RunConfig read_config(const std::string& path);
/// The fully resolved configuration, defaults included.
nlohmann::json config_to_json(const RunConfig& config);

/// Structured fit report: estimates, SEs, intervals, tau, log-likelihood,
/// diagnostics and the baseline survival table.
nlohmann::json fit_report(const FitResult& fit, const RunConfig& config);
/// Adds a comparison of the estimates with a truth sidecar to a fit report.
void add_truth_comparison(nlohmann::json& report, const FitResult& fit, const nlohmann::json& truth, double level);

nlohmann::json truth_to_json(const SimTruth& truth, const SimConfig& config);

/// One row per target: method, families, truth, BIAS, ESD, ASE, rMSE, CP, counts.
void write_mc_table(std::ostream& out, const McSummary& summary);

/// Writes text to a file, throwing std::runtime_error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace semicomp

#endif  // SEMICOMP_IO_HPP
