#include "semicomp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "semicomp/errors.hpp"
#include "semicomp/inference.hpp"

namespace semicomp {

using Eigen::Index;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const std::string& source, long line, std::size_t column, const std::string& name) {
  std::string s = source + ": line " + std::to_string(line);
  if (column > 0) s += ", column " + std::to_string(column) + " (" + name + ")";
  return s;
}

// Column role parsed from a header name such as "z3".
struct Column {
  enum Kind { X, C, DeltaT, DeltaD, Z, W } kind;
  int index = 0;  // 0-based for z/w
};

std::optional<Column> parse_column(const std::string& name) {
  if (name == "x") return Column{Column::X};
  if (name == "c") return Column{Column::C};
  if (name == "delta_t") return Column{Column::DeltaT};
  if (name == "delta_d") return Column{Column::DeltaD};
  if (name.size() >= 2 && (name[0] == 'z' || name[0] == 'w')) {
    int k = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
    if (ec == std::errc() && ptr == name.data() + name.size() && k >= 1 && name[1] != '0')
      return Column{name[0] == 'z' ? Column::Z : Column::W, k - 1};
  }
  return std::nullopt;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset read_dataset(std::istream& in, const std::string& source) {
  std::string line;
  long line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DatasetError(0, source + ": no header line");

  std::vector<Column> cols;
  std::set<std::string> seen;
  int p = 0, q = 0;
  for (std::size_t k = 0; k < header.size(); ++k) {
    const auto col = parse_column(header[k]);
    if (!col) throw DatasetError(0, where(source, line_no, k + 1, header[k]) + ": unknown column name");
    if (!seen.insert(header[k]).second)
      throw DatasetError(0, where(source, line_no, k + 1, header[k]) + ": duplicate column");
    if (col->kind == Column::Z) p = std::max(p, col->index + 1);
    if (col->kind == Column::W) q = std::max(q, col->index + 1);
    cols.push_back(*col);
  }
  for (const char* req : {"x", "c", "delta_t", "delta_d"})
    if (!seen.count(req)) throw DatasetError(0, where(source, line_no, 0, "") + ": missing required column " + req);
  for (int k = 1; k <= p; ++k)
    if (!seen.count("z" + std::to_string(k)))
      throw DatasetError(0, where(source, line_no, 0, "") + ": covariate columns must run z1..z" + std::to_string(p));
  for (int k = 1; k <= q; ++k)
    if (!seen.count("w" + std::to_string(k)))
      throw DatasetError(0, where(source, line_no, 0, "") + ": copula covariate columns must run w1..w" + std::to_string(q));

  std::vector<double> x, c;
  std::vector<int> dt, dd;
  std::vector<std::vector<double>> z, w;
  std::vector<long> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != cols.size())
      throw DatasetError(static_cast<long>(lines.size()) + 1,
                         where(source, line_no, 0, "") + ": expected " + std::to_string(cols.size()) + " fields, found " +
                             std::to_string(f.size()));
    const long row = static_cast<long>(lines.size()) + 1;
    lines.push_back(line_no);
    x.push_back(NAN);
    c.push_back(NAN);
    dt.push_back(-1);
    dd.push_back(-1);
    z.emplace_back(p, NAN);
    w.emplace_back(q, NAN);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::string& s = f[k];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DatasetError(row, where(source, line_no, k + 1, header[k]) + ": '" + s + "' is not a number");
      switch (cols[k].kind) {
        case Column::X: x.back() = v; break;
        case Column::C: c.back() = v; break;
        case Column::DeltaT:
        case Column::DeltaD:
          if (v != 0.0 && v != 1.0)
            throw DatasetError(row, where(source, line_no, k + 1, header[k]) + ": event indicator must be 0 or 1");
          (cols[k].kind == Column::DeltaT ? dt : dd).back() = static_cast<int>(v);
          break;
        case Column::Z: z.back()[cols[k].index] = v; break;
        case Column::W: w.back()[cols[k].index] = v; break;
      }
    }
  }
  if (lines.empty()) throw DatasetError(0, source + ": no data rows");

  const Index n = static_cast<Index>(lines.size());
  Dataset d;
  d.x = Eigen::Map<VectorXd>(x.data(), n);
  d.c = Eigen::Map<VectorXd>(c.data(), n);
  d.delta_t = Eigen::Map<Eigen::VectorXi>(dt.data(), n);
  d.delta_d = Eigen::Map<Eigen::VectorXi>(dd.data(), n);
  d.z.resize(n, p);
  if (q > 0) d.w.resize(n, q);
  for (Index i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k) d.z(i, k) = z[i][k];
    for (int k = 0; k < q; ++k) d.w(i, k) = w[i][k];
  }
  try {
    d.validate();
  } catch (const DatasetError& e) {
    if (e.row() <= 0) throw DatasetError(0, source + ": " + e.what());
    const std::string what = e.what();
    const std::string detail = what.substr(what.find(": ") + 2);
    throw DatasetError(e.row(), where(source, lines[e.row() - 1], 0, "") + ": " + detail);
  }
  return d;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return read_dataset(in, path);
}

void write_dataset(std::ostream& out, const Dataset& d) {
  out << "x,c,delta_t,delta_d";
  for (Index k = 0; k < d.p(); ++k) out << ",z" << k + 1;
  for (Index k = 0; k < d.w.cols(); ++k) out << ",w" << k + 1;
  out << '\n';
  for (Index i = 0; i < d.size(); ++i) {
    out << fmt17(d.x[i]) << ',' << fmt17(d.c[i]) << ',' << d.delta_t[i] << ',' << d.delta_d[i];
    for (Index k = 0; k < d.p(); ++k) out << ',' << fmt17(d.z(i, k));
    for (Index k = 0; k < d.w.cols(); ++k) out << ',' << fmt17(d.w(i, k));
    out << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_dataset(const std::string& path, const Dataset& d) {
  std::ostringstream s;
  write_dataset(s, d);
  write_text(path, s.str());
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

// Walks one object, checking keys against an allow-list.
class Section {
 public:
  Section(const json& doc, std::string path, std::set<std::string> allowed) : path_(std::move(path)) {
    if (!doc.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& [key, value] : doc.items())
      if (!allowed.count(key)) throw ConfigError(key_path(key) + ": unknown key");
    doc_ = &doc;
  }

  bool has(const std::string& key) const { return doc_->contains(key) && !(*doc_)[key].is_null(); }
  const json& at(const std::string& key) const { return (*doc_)[key]; }
  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void read(const std::string& key, double& v) const {
    if (!has(key)) return;
    if (!at(key).is_number()) throw ConfigError(key_path(key) + ": expected a number");
    v = at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(key_path(key) + ": must be finite");
  }
  void read(const std::string& key, int& v) const {
    if (!has(key)) return;
    if (!at(key).is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    const auto i = at(key).get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
      throw ConfigError(key_path(key) + ": out of range");
    v = static_cast<int>(i);
  }
  void read(const std::string& key, std::uint64_t& v) const {
    if (!has(key)) return;
    if (!at(key).is_number_unsigned()) throw ConfigError(key_path(key) + ": expected a nonnegative integer");
    v = at(key).get<std::uint64_t>();
  }
  void read(const std::string& key, bool& v) const {
    if (!has(key)) return;
    if (!at(key).is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    v = at(key).get<bool>();
  }
  void read(const std::string& key, std::string& v) const {
    if (!has(key)) return;
    if (!at(key).is_string()) throw ConfigError(key_path(key) + ": expected a string");
    v = at(key).get<std::string>();
  }
  void read(const std::string& key, Eigen::Vector2d& v) const {
    if (!has(key)) return;
    const json& a = at(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw ConfigError(key_path(key) + ": expected an array of two numbers");
    v = {a[0].get<double>(), a[1].get<double>()};
  }

  template <typename Parse, typename T>
  void read_enum(const std::string& key, T& v, Parse parse) const {
    std::string s;
    read(key, s);
    if (s.empty()) return;
    try {
      v = parse(s);
    } catch (const std::exception& e) {
      throw ConfigError(key_path(key) + ": " + e.what());
    }
  }

 private:
  const json* doc_ = nullptr;
  std::string path_;
};

json interval_json(const Interval& i) {
  return {{"estimate", i.estimate}, {"se", i.se}, {"lo", i.lo}, {"hi", i.hi}, {"truncated", i.truncated}};
}

json diagnostics_json(const OptimizerDiagnostics& d) {
  return {{"converged", d.converged},
          {"iterations", d.iterations},
          {"evaluations", d.evaluations},
          {"gradient_norm", d.gradient_norm},
          {"hessian_modified", d.hessian_modified},
          {"message", d.message}};
}

Interval coordinate_interval(const FitResult& fit, Index k, double level) {
  const double z = normal_critical(level);
  const double est = pack(fit.theta)[k];
  return {est, fit.se[k], est - z * fit.se[k], est + z * fit.se[k], false};
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  const Section top(doc, "", {"model", "fit", "optimizer", "sim", "report"});

  if (top.has("model")) {
    const Section s(top.at("model"), "model", {"family", "g_t", "g_d", "link", "gumbel_epsilon_auto"});
    s.read_enum("family", cfg.model.copula.family, parse_family);
    s.read_enum("g_t", cfg.model.g_t, parse_transform);
    s.read_enum("g_d", cfg.model.g_d, parse_transform);
    if (s.has("link")) {
      Link link = Link::Identity;
      s.read_enum("link", link, parse_link);
      cfg.model.copula.link = link;
    }
    s.read("gumbel_epsilon_auto", cfg.model.gumbel_epsilon_auto);
  }
  if (top.has("fit")) {
    const Section s(top.at("fit"), "fit", {"mle_independent_start", "stage1_correction"});
    s.read("mle_independent_start", cfg.fit.mle_independent_start);
    s.read("stage1_correction", cfg.fit.stage1_correction);
  }
  if (top.has("optimizer")) {
    const Section s(top.at("optimizer"), "optimizer",
                    {"initial_radius", "max_radius", "eta_accept", "gradient_tol", "step_tol", "max_iter"});
    TrustRegionConfig& o = cfg.fit.optimizer;
    s.read("initial_radius", o.initial_radius);
    s.read("max_radius", o.max_radius);
    s.read("eta_accept", o.eta_accept);
    s.read("gradient_tol", o.gradient_tol);
    s.read("step_tol", o.step_tol);
    s.read("max_iter", o.max_iter);
  }
  cfg.fit.optimizer.validate();
  if (top.has("sim")) {
    const Section s(top.at("sim"), "sim",
                    {"n", "family", "tau", "beta_t", "beta_d", "seed", "censor_rate", "admin_time",
                     "z1_half_is_variance", "n_reps"});
    SimConfig& c = cfg.sim;
    s.read("n", c.n);
    s.read_enum("family", c.family, parse_family);
    s.read("tau", c.tau);
    s.read("beta_t", c.beta_t);
    s.read("beta_d", c.beta_d);
    s.read("seed", c.seed);
    s.read("censor_rate", c.censor_rate);
    if (s.has("admin_time")) {
      double a = 0.0;
      s.read("admin_time", a);
      c.admin_time = a;
    }
    s.read("z1_half_is_variance", c.z1_half_is_variance);
    s.read("n_reps", c.n_reps);
  }
  cfg.sim.validate();
  if (top.has("report")) {
    const Section s(top.at("report"), "report", {"targets", "survival_times", "level", "output"});
    if (s.has("targets")) {
      const json& a = s.at("targets");
      if (!a.is_array() || a.empty()) throw ConfigError("report.targets: expected a non-empty array of names");
      cfg.report.targets.clear();
      for (const json& t : a) {
        if (!t.is_string()) throw ConfigError("report.targets: expected strings");
        cfg.report.targets.push_back(t.get<std::string>());
      }
    }
    if (s.has("survival_times")) {
      const json& a = s.at("survival_times");
      if (!a.is_array()) throw ConfigError("report.survival_times: expected an array of numbers");
      for (const json& t : a) {
        if (!t.is_number() || !(t.get<double>() >= 0.0))
          throw ConfigError("report.survival_times: expected nonnegative numbers");
        cfg.report.survival_times.push_back(t.get<double>());
      }
    }
    s.read("level", cfg.report.level);
    if (!(cfg.report.level > 0.0 && cfg.report.level < 1.0)) throw ConfigError("report.level: must lie in (0, 1)");
    if (s.has("output")) {
      std::string out;
      s.read("output", out);
      cfg.report.output = out;
    }
  }
  for (const std::string& t : cfg.report.targets) {
    try {
      resolve_target(t, cfg.sim);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("report.targets: ") + e.what());
    }
  }
  return cfg;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": invalid JSON");
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json config_to_json(const RunConfig& c) {
  json model = {{"family", family_name(c.model.copula.family)},
                {"g_t", transform_name(c.model.g_t)},
                {"g_d", transform_name(c.model.g_d)},
                {"link", c.model.copula.link ? json(link_name(*c.model.copula.link)) : json(nullptr)},
                {"gumbel_epsilon_auto", c.model.gumbel_epsilon_auto}};
  const TrustRegionConfig& o = c.fit.optimizer;
  json optimizer = {{"initial_radius", o.initial_radius}, {"max_radius", o.max_radius},
                    {"eta_accept", o.eta_accept},         {"gradient_tol", o.gradient_tol},
                    {"step_tol", o.step_tol},             {"max_iter", o.max_iter}};
  const SimConfig& s = c.sim;
  json sim = {{"n", s.n},
              {"family", family_name(s.family)},
              {"tau", s.tau},
              {"beta_t", {s.beta_t[0], s.beta_t[1]}},
              {"beta_d", {s.beta_d[0], s.beta_d[1]}},
              {"seed", s.seed},
              {"censor_rate", s.censor_rate},
              {"admin_time", s.admin_time ? json(*s.admin_time) : json(nullptr)},
              {"z1_half_is_variance", s.z1_half_is_variance},
              {"n_reps", s.n_reps}};
  json report = {{"targets", c.report.targets},
                 {"survival_times", c.report.survival_times},
                 {"level", c.report.level},
                 {"output", c.report.output ? json(*c.report.output) : json(nullptr)}};
  return {{"model", model},
          {"fit", {{"mle_independent_start", c.fit.mle_independent_start},
                   {"stage1_correction", c.fit.stage1_correction}}},
          {"optimizer", optimizer},
          {"sim", sim},
          {"report", report}};
}

// ---------------------------------------------------------------------------
// Reports

json fit_report(const FitResult& fit, const RunConfig& config) {
  const double level = config.report.level;
  const Index q = fit.theta.theta1.alpha.size();
  const Index p = fit.theta.theta1.t.beta.size();
  const Index kt = fit.grid_t.size();
  const Index d1 = fit.dim_theta1();

  json r;
  r["method"] = method_name(fit.method);
  r["model"] = {{"family", family_name(fit.model.copula.family)},
                {"g_t", transform_name(fit.model.g_t)},
                {"g_d", transform_name(fit.model.g_d)},
                {"link", fit.model.copula.link ? json(link_name(*fit.model.copula.link)) : json(nullptr)},
                {"epsilon", fit.epsilon}};
  r["data"] = {{"n", fit.n}, {"p", p}, {"kappa_t", kt}, {"kappa_d", fit.grid_d.size()}, {"xi", fit.xi}};
  r["level"] = level;
  r["converged"] = fit.converged;
  r["loglik"] = fit.loglik;
  r["diagnostics"] = {{"iterations", fit.iterations},
                      {"max_hessian_eigenvalue", fit.max_hessian_eigenvalue},
                      {"stage1", diagnostics_json(fit.stage1)},
                      {"stage2", diagnostics_json(fit.stage2)}};

  if (fit.model.copula.link) {
    json gamma = json::array();
    for (Index k = 0; k < q; ++k) gamma.push_back(interval_json(coordinate_interval(fit, k, level)));
    r["gamma"] = gamma;
  } else {
    r["alpha"] = interval_json(ci_alpha(fit, level));
    r["tau"] = interval_json(tau_ci(fit, level));
  }
  json bt = json::array(), bd = json::array();
  for (Index k = 0; k < p; ++k) {
    json e = interval_json(ci_linear_functional(fit, VectorXd::Unit(d1, q + k), level));
    e["name"] = "z" + std::to_string(k + 1);
    bt.push_back(e);
    json f = interval_json(coordinate_interval(fit, d1 + k, level));
    f["name"] = "z" + std::to_string(k + 1);
    bd.push_back(f);
  }
  r["beta_t"] = bt;
  r["beta_d"] = bd;

  auto baseline = [&](const VectorXd& grid, const VectorXd& dr, Index offset) {
    json b = {{"times", json::array()}, {"jumps", json::array()}, {"se", json::array()}};
    for (Index l = 0; l < grid.size(); ++l) {
      b["times"].push_back(grid[l]);
      b["jumps"].push_back(dr[l]);
      b["se"].push_back(fit.se[offset + l]);
    }
    return b;
  };
  r["baseline_t"] = baseline(fit.grid_t, fit.theta.theta1.t.dr, q + p);
  r["baseline_d"] = baseline(fit.grid_d, fit.theta.theta_d.dr, d1 + p);

  json table = json::array();
  for (const double t : config.report.survival_times) {
    if (t > fit.xi) {
      table.push_back({{"t", t}, {"note", "beyond the largest follow-up time"}});
      continue;
    }
    const Interval s = ci_baseline_survival(fit, t, level);
    table.push_back({{"t", t}, {"estimate", s.estimate}, {"se", s.se}, {"lo", s.lo}, {"hi", s.hi}});
  }
  r["baseline_survival_t"] = table;
  r["config"] = config_to_json(config);
  return r;
}

json truth_to_json(const SimTruth& t, const SimConfig& config) {
  return {{"family", family_name(t.family)},
          {"alpha", t.alpha},
          {"tau", t.tau},
          {"beta_t", {t.beta_t[0], t.beta_t[1]}},
          {"beta_d", {t.beta_d[0], t.beta_d[1]}},
          {"baseline", {{"transform", "ph"}, {"rate", 1.0 / 3.0}, {"description", "R(t) = t / 3 for both margins"}}},
          {"admin_time", t.admin_time},
          {"seed", t.seed},
          {"n", config.n},
          {"z1_half_is_variance", config.z1_half_is_variance},
          {"censor_rate_t", t.censor_rate_t},
          {"censor_rate_d", t.censor_rate_d}};
}

void add_truth_comparison(json& report, const FitResult& fit, const json& truth, double level) {
  json rows = json::array();
  auto add = [&](const std::string& name, double want, const Interval& ci) {
    rows.push_back({{"parameter", name},
                    {"truth", want},
                    {"estimate", ci.estimate},
                    {"error", ci.estimate - want},
                    {"covered", ci.lo <= want && want <= ci.hi}});
  };
  try {
    const Family true_family = parse_family(truth.at("family").get<std::string>());
    const Index q = fit.theta.theta1.alpha.size();
    const Index d1 = fit.dim_theta1();
    if (!fit.model.copula.link) {
      if (fit.model.copula.family == true_family) add("alpha", truth.at("alpha").get<double>(), ci_alpha(fit, level));
      add("tau", truth.at("tau").get<double>(), tau_ci(fit, level));
    }
    const json& bt = truth.at("beta_t");
    const json& bd = truth.at("beta_d");
    const Index p = fit.theta.theta1.t.beta.size();
    if (static_cast<Index>(bt.size()) != p || static_cast<Index>(bd.size()) != p)
      throw ConfigError("truth sidecar has a different number of covariates");
    for (Index k = 0; k < p; ++k) {
      add("beta_t" + std::to_string(k + 1), bt[k].get<double>(), coordinate_interval(fit, q + k, level));
      add("beta_d" + std::to_string(k + 1), bd[k].get<double>(), coordinate_interval(fit, d1 + k, level));
    }
    const double rate = truth.at("baseline").at("rate").get<double>();
    for (const json& row : report.at("baseline_survival_t")) {
      const double t = row.at("t").get<double>();
      if (t > fit.xi) continue;
      // The generative baseline survival is exp(-rate t) whatever transform was fitted.
      add("surv_t@" + row.at("t").dump(), std::exp(-rate * t), ci_baseline_survival(fit, t, level));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("truth sidecar: ") + e.what());
  }
  report["truth_comparison"] = rows;
}

void write_mc_table(std::ostream& out, const McSummary& s) {
  out << "method,true_family,fit_family,target,truth,scale,bias,esd,ase,rmse,cp,n_used,n_converged,n_reps\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const McRow& r : s.rows) {
    out << s.method << ',' << s.true_family << ',' << s.fit_family << ',' << r.target << ',' << num(r.truth) << ','
        << (r.relative ? "relative" : "absolute") << ',' << num(r.bias) << ',' << num(r.esd) << ',' << num(r.ase)
        << ',' << num(r.rmse) << ',' << num(r.cp) << ',' << r.n_used << ',' << s.n_converged << ',' << s.n_reps
        << '\n';
  }
}

}  // namespace semicomp
