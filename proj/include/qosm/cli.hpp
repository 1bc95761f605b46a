#pragma once

// Command implementations behind the `qosm` executable. Each command renders
// to a stream so tests can drive it without a subprocess.
//
// Exit codes: 0 success, 2 parameter error, 3 regime mismatch, 4 I/O failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qosm/cascade.hpp"
#include "qosm/demand.hpp"
#include "qosm/equilibrium.hpp"
#include "qosm/numeric.hpp"
#include "qosm/regime.hpp"
#include "qosm/uc_bounded.hpp"

namespace qosm::cli {

using ordered_json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kNumericFailure = 1, kParameterError = 2, kRegimeMismatch = 3, kIoError = 4 };

class ParameterError : public std::runtime_error {
 public:
  explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class OutputFormat { Csv, Json };

/// Every field optional so a config file and flags can be layered.
struct RunConfig {
  std::string command;
  std::optional<double> alpha;
  std::optional<double> q_m;
  std::optional<double> s;
  std::optional<std::string> h;
  std::optional<double> beta;
  std::optional<double> a;
  std::optional<double> c;
  std::optional<double> c_start;
  std::optional<double> c_stop;
  std::optional<int> c_count;
  std::optional<bool> c_log;
  std::optional<double> b;
  std::optional<double> low;
  std::optional<int> max_classes;
  std::optional<std::string> format;
  std::optional<std::string> out;
  int precision = 12;
};

namespace detail {

template <class T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
  if (top) base = top;
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("config: key '") + key + "' has the wrong type");
  }
}

}  // namespace detail

/// `top` wins wherever it has a value.
inline RunConfig merge(RunConfig base, const RunConfig& top) {
  using detail::overlay;
  if (!top.command.empty()) base.command = top.command;
  overlay(base.alpha, top.alpha);
  overlay(base.q_m, top.q_m);
  overlay(base.s, top.s);
  overlay(base.h, top.h);
  overlay(base.beta, top.beta);
  overlay(base.a, top.a);
  overlay(base.c, top.c);
  overlay(base.c_start, top.c_start);
  overlay(base.c_stop, top.c_stop);
  overlay(base.c_count, top.c_count);
  overlay(base.c_log, top.c_log);
  overlay(base.b, top.b);
  overlay(base.low, top.low);
  overlay(base.max_classes, top.max_classes);
  overlay(base.format, top.format);
  overlay(base.out, top.out);
  base.precision = top.precision;
  return base;
}

/// Keys mirror the long flags with '-' replaced by '_' (c_start, max_classes, ...); "qm" for q_m.
inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("config: top level must be a JSON object");
  RunConfig cfg;
  using detail::read_key;
  read_key(j, "alpha", cfg.alpha);
  read_key(j, "qm", cfg.q_m);
  read_key(j, "s", cfg.s);
  read_key(j, "h", cfg.h);
  read_key(j, "beta", cfg.beta);
  read_key(j, "a", cfg.a);
  read_key(j, "c", cfg.c);
  read_key(j, "c_start", cfg.c_start);
  read_key(j, "c_stop", cfg.c_stop);
  read_key(j, "c_count", cfg.c_count);
  read_key(j, "c_log", cfg.c_log);
  read_key(j, "b", cfg.b);
  read_key(j, "low", cfg.low);
  read_key(j, "max_classes", cfg.max_classes);
  read_key(j, "format", cfg.format);
  read_key(j, "out", cfg.out);
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// formatting

/// Fixed significant digits, '.' separator, "inf"/"-inf"/"nan" for non-finite values.
inline std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

/// JSON value of x rounded to `precision` significant digits; null when not finite.
inline ordered_json json_number(double x, int precision) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x, precision));
}

inline ordered_json json_number(const std::optional<double>& x, int precision) {
  return x ? json_number(*x, precision) : ordered_json(nullptr);
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, int precision) : out_(out), precision_(precision) {}

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* col : cols) {
      if (!first) out_ << ',';
      out_ << col;
      first = false;
    }
    out_ << '\n';
  }

  CsvWriter& cell(double x) { return raw(format_number(x, precision_)); }
  CsvWriter& cell(int x) { return raw(std::to_string(x)); }
  CsvWriter& empty() { return raw(""); }

  CsvWriter& raw(const std::string& text) {
    if (!first_cell_) out_ << ',';
    out_ << text;
    first_cell_ = false;
    return *this;
  }

  void end_row() {
    out_ << '\n';
    first_cell_ = true;
  }

 private:
  std::ostream& out_;
  int precision_;
  bool first_cell_ = true;
};

// ---------------------------------------------------------------------------
// parameter checks

template <class T>
const T& require(const std::optional<T>& v, const char* flag) {
  if (!v) throw ParameterError(std::string("missing required parameter ") + flag);
  return *v;
}

inline double scale_exponent(const RunConfig& cfg) {
  const double s = require(cfg.s, "--s");
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("--s must lie strictly between 0 and 1 (got " + format_number(s, 12) + ")");
  return s;
}

inline PowerLaw power_law(const RunConfig& cfg) {
  const double alpha = require(cfg.alpha, "--alpha");
  if (!std::isfinite(alpha)) throw ParameterError("--alpha must be finite");
  return PowerLaw{alpha};
}

inline PriceResponse price_response(const RunConfig& cfg) {
  const std::string& family = require(cfg.h, "--h");
  if (family == "rational") {
    const double beta = require(cfg.beta, "--beta (needed by --h rational)");
    const double a = cfg.a.value_or(1.0);
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("--beta must be > 0");
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("--a must be > 0");
    return Rational{beta, a};
  }
  if (family == "exp") return Exponential{};
  if (family == "gauss") return Gaussian{};
  throw ParameterError("--h must be one of rational, exp, gauss (got '" + family + "')");
}

inline double positive_c(double c, const char* flag) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError(std::string(flag) + " must be a finite value > 0");
  return c;
}

/// Single --c, or --c-start/--c-stop/--c-count[/--c-log]; always strictly decreasing.
inline std::vector<double> c_grid(const RunConfig& cfg) {
  const bool has_range = cfg.c_start || cfg.c_stop || cfg.c_count;
  if (cfg.c && has_range) throw ParameterError("give either --c or a --c-start/--c-stop/--c-count grid, not both");
  if (cfg.c) return {positive_c(*cfg.c, "--c")};
  if (!has_range) throw ParameterError("missing --c or --c-start/--c-stop/--c-count");
  const double start = positive_c(require(cfg.c_start, "--c-start"), "--c-start");
  const double stop = positive_c(require(cfg.c_stop, "--c-stop"), "--c-stop");
  const int count = require(cfg.c_count, "--c-count");
  if (count < 1) throw ParameterError("--c-count must be >= 1");
  if (count > 1 && !(start > stop)) throw ParameterError("--c-start must exceed --c-stop (grids run from high to low c)");
  auto grid = numeric::spaced_grid(start, stop, static_cast<std::size_t>(count), cfg.c_log.value_or(false));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) throw ParameterError("c grid is not strictly decreasing after expansion");
  }
  return grid;
}

inline int max_classes(const RunConfig& cfg) {
  const int n = cfg.max_classes.value_or(kDefaultMaxClasses);
  if (n < 1) throw ParameterError("--max-classes must be >= 1");
  return n;
}

inline OutputFormat output_format(const RunConfig& cfg, OutputFormat fallback) {
  if (!cfg.format) return fallback;
  if (*cfg.format == "csv") return OutputFormat::Csv;
  if (*cfg.format == "json") return OutputFormat::Json;
  throw ParameterError("--format must be csv or json");
}

inline std::string h_name(const PriceResponse& h) {
  if (std::holds_alternative<Rational>(h)) return "rational";
  if (std::holds_alternative<Exponential>(h)) return "exp";
  return "gauss";
}

// ---------------------------------------------------------------------------
// commands

inline ordered_json verdict_json(const PowerLaw& f, const PriceResponse& h, double s, int precision) {
  const RegimeVerdict v = classify_regime(f, h, s);
  ordered_json j;
  j["regime"] = to_string(v.regime);
  j["alpha"] = json_number(f.alpha, precision);
  j["s"] = json_number(s, precision);
  j["h"] = h_name(h);
  if (const auto* r = std::get_if<Rational>(&h)) {
    j["beta"] = json_number(r->beta, precision);
    j["a"] = json_number(r->a, precision);
  }
  j["sensitivity"] = to_string(v.sensitivity);
  j["boundary_margin"] = json_number(v.boundary_margin, precision);
  j["q0"] = json_number(v.q0, precision);
  if (v.is_dc()) {
    j["delta"] = json_number(scaling_exponent(f, s), precision);
    j["price_ratio_limit"] = json_number(price_ratio_limit(f, s), precision);
    j["traffic_ratio_limit"] = json_number(traffic_ratio_limit(f, s), precision);
    j["first_threshold"] = json_number(first_threshold(f, h, s), precision);
  } else {
    j["delta"] = nullptr;
    j["price_ratio_limit"] = nullptr;
    j["traffic_ratio_limit"] = nullptr;
    j["first_threshold"] = nullptr;
  }
  return j;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const PowerLaw f = power_law(cfg);
  const double s = scale_exponent(cfg);
  out << verdict_json(f, price_response(cfg), s, cfg.precision).dump(2) << '\n';
  return kOk;
}

inline int cmd_ratio_limits(const RunConfig& cfg, std::ostream& out) {
  const PowerLaw f = power_law(cfg);
  const double s = scale_exponent(cfg);
  if (!is_dc(f, s)) throw RegimeError("ratio limits are defined only in the DC regime");
  ordered_json j;
  j["alpha"] = json_number(f.alpha, cfg.precision);
  j["s"] = json_number(s, cfg.precision);
  j["q0"] = json_number(optimal_quality(f, s), cfg.precision);
  j["delta"] = json_number(scaling_exponent(f, s), cfg.precision);
  j["price_ratio_limit"] = json_number(price_ratio_limit(f, s), cfg.precision);
  j["traffic_ratio_limit"] = json_number(traffic_ratio_limit(f, s), cfg.precision);
  out << j.dump(2) << '\n';
  return kOk;
}

/// Price of one class of quality b serving (low, b]; b defaults to q0 in DC.
inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const PowerLaw f = power_law(cfg);
  const double s = scale_exponent(cfg);
  const PriceResponse h = price_response(cfg);
  const double c = positive_c(require(cfg.c, "--c"), "--c");
  const double low = cfg.low.value_or(1.0);
  if (!(low >= 1.0)) throw ParameterError("--low must be >= 1");
  double b = 0.0;
  if (cfg.b) {
    b = *cfg.b;
  } else {
    if (!is_dc(f, s)) throw RegimeError("UC regime has no finite optimal quality; pass --b");
    b = low * optimal_quality(f, s);
  }
  if (!(b > low) || !std::isfinite(b)) throw ParameterError("--b must be finite and exceed --low");
  const double target = rhs(f, s, c, low, b);
  const auto outcome = solve_price(h, s, target);
  const int p = cfg.precision;
  ordered_json j;
  j["quality"] = json_number(b, p);
  j["low"] = json_number(low, p);
  j["c"] = json_number(c, p);
  j["rhs"] = json_number(target, p);
  if (const auto* sol = std::get_if<EquilibriumSolution>(&outcome)) {
    const double demand = eval_h(h, sol->price) * cumulative_demand(f, low, b);
    j["profitable"] = true;
    j["price"] = json_number(sol->price, p);
    j["residual"] = json_number(sol->residual, p);
    j["root"] = to_string(sol->multiplicity);
    j["demand"] = json_number(demand, p);
    j["weighted_traffic"] = json_number(b * demand, p);
    j["revenue"] = json_number(sol->price * demand, p);
  } else {
    j["profitable"] = false;
    j["price"] = nullptr;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

inline int cmd_cascade(const RunConfig& cfg, std::ostream& out) {
  const PowerLaw f = power_law(cfg);
  const double s = scale_exponent(cfg);
  const PriceResponse h = price_response(cfg);
  const auto grid = c_grid(cfg);
  const int cap = max_classes(cfg);
  const Cascade cascade(f, h, s);  // RegimeError in UC
  const auto snaps = cascade.sweep(grid, cap);
  const int p = cfg.precision;
  if (output_format(cfg, OutputFormat::Csv) == OutputFormat::Json) {
    ordered_json j;
    j["regime"] = verdict_json(f, h, s, p);
    ordered_json rows = ordered_json::array();
    for (const auto& snap : snaps) {
      ordered_json js;
      js["c"] = json_number(snap.c, p);
      js["truncated"] = snap.truncated;
      ordered_json classes = ordered_json::array();
      for (const auto& k : snap.classes) {
        classes.push_back({{"class_index", k.index},
                           {"lower_q", json_number(k.lower_boundary, p)},
                           {"upper_q", json_number(k.quality, p)},
                           {"price", json_number(k.price, p)},
                           {"demand", json_number(k.demand, p)},
                           {"weighted_traffic", json_number(k.weighted_traffic, p)},
                           {"revenue", json_number(k.revenue, p)},
                           {"appearance_threshold", json_number(k.appearance_threshold, p)}});
      }
      js["classes"] = std::move(classes);
      rows.push_back(std::move(js));
    }
    j["snapshots"] = std::move(rows);
    out << j.dump(2) << '\n';
    return kOk;
  }
  CsvWriter csv(out, p);
  csv.header({"c", "class_index", "lower_q", "upper_q", "price", "demand", "weighted_traffic", "revenue",
              "appearance_threshold"});
  for (const auto& snap : snaps) {
    for (const auto& k : snap.classes) {
      csv.cell(snap.c).cell(k.index).cell(k.lower_boundary).cell(k.quality).cell(k.price).cell(k.demand);
      csv.cell(k.weighted_traffic).cell(k.revenue).cell(k.appearance_threshold).end_row();
    }
  }
  return kOk;
}

/// One summary row per c.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const PowerLaw f = power_law(cfg);
  const double s = scale_exponent(cfg);
  const PriceResponse h = price_response(cfg);
  const auto grid = c_grid(cfg);
  const Cascade cascade(f, h, s);
  const auto snaps = cascade.sweep(grid, max_classes(cfg));
  const int p = cfg.precision;
  const bool json = output_format(cfg, OutputFormat::Csv) == OutputFormat::Json;
  ordered_json rows = ordered_json::array();
  CsvWriter csv(out, p);
  if (!json) {
    csv.header({"c", "class_count", "truncated", "lowest_price", "highest_price", "total_demand",
                "total_weighted_traffic", "total_revenue"});
  }
  for (const auto& snap : snaps) {
    double demand = 0.0, traffic = 0.0, revenue = 0.0;
    for (const auto& k : snap.classes) {
      demand += k.demand;
      traffic += k.weighted_traffic;
      revenue += k.revenue;
    }
    const int count = static_cast<int>(snap.classes.size());
    if (json) {
      rows.push_back({{"c", json_number(snap.c, p)},
                      {"class_count", count},
                      {"truncated", snap.truncated},
                      {"lowest_price", count ? json_number(snap.classes.front().price, p) : ordered_json(nullptr)},
                      {"highest_price", count ? json_number(snap.classes.back().price, p) : ordered_json(nullptr)},
                      {"total_demand", json_number(demand, p)},
                      {"total_weighted_traffic", json_number(traffic, p)},
                      {"total_revenue", json_number(revenue, p)}});
      continue;
    }
    csv.cell(snap.c).cell(count).raw(snap.truncated ? "1" : "0");
    if (count) {
      csv.cell(snap.classes.front().price).cell(snap.classes.back().price);
    } else {
      csv.empty().empty();
    }
    csv.cell(demand).cell(traffic).cell(revenue).end_row();
  }
  if (json) out << rows.dump(2) << '\n';
  return kOk;
}

inline ordered_json uc_sidecar(double q_m, int precision) {
  ordered_json j;
  j["q_m"] = json_number(q_m, precision);
  j["quality"] = json_number(q_m, precision);
  j["threshold"] = json_number(uc_threshold(q_m), precision);
  return j;
}

/// Capped UC model over a c grid; unprofitable rows keep empty value cells.
inline int cmd_uc(const RunConfig& cfg, std::ostream& out, std::ostream* sidecar) {
  const double q_m = require(cfg.q_m, "--qm");
  if (!(q_m > 1.0) || !std::isfinite(q_m)) throw ParameterError("--qm must be a finite value > 1");
  const auto grid = c_grid(cfg);
  const int p = cfg.precision;
  const bool json = output_format(cfg, OutputFormat::Csv) == OutputFormat::Json;
  ordered_json rows = ordered_json::array();
  CsvWriter csv(out, p);
  if (!json) csv.header({"c", "price", "traffic", "revenue"});
  for (double c : grid) {
    const auto result = uc_equilibrium(BoundedUcConfig{q_m, c});
    const auto* o = std::get_if<UcOutcome>(&result);
    if (json) {
      rows.push_back({{"c", json_number(c, p)},
                      {"price", o ? json_number(o->price, p) : ordered_json(nullptr)},
                      {"traffic", o ? json_number(o->weighted_traffic, p) : ordered_json(nullptr)},
                      {"revenue", o ? json_number(o->revenue, p) : ordered_json(nullptr)}});
      continue;
    }
    csv.cell(c);
    if (o) {
      csv.cell(o->price).cell(o->weighted_traffic).cell(o->revenue);
    } else {
      csv.empty().empty().empty();
    }
    csv.end_row();
  }
  if (json) {
    ordered_json j = uc_sidecar(q_m, p);
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
  }
  if (sidecar) *sidecar << uc_sidecar(q_m, p).dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// figure data

namespace figures {

inline const MarketConfig& bdc_config() {
  static const MarketConfig cfg{PowerLaw{-2.5}, Rational{6.0, 0.7}, 2.0 / 3.0, 1.0};
  return cfg;
}

inline const MarketConfig& udc_config() {
  static const MarketConfig cfg{PowerLaw{-2.5}, Rational{2.0, 1.0}, 2.0 / 3.0, 1.0};
  return cfg;
}

inline void lhs_curve(std::ostream& out, int precision, const PriceResponse& h, double s, double p_max) {
  CsvWriter csv(out, precision);
  csv.header({"p", "lhs"});
  for (double p : numeric::spaced_grid(0.0, p_max, 301, false)) csv.cell(p).cell(lhs(h, s, p)).end_row();
}

inline void rhs_curves(std::ostream& out, int precision, double alpha) {
  CsvWriter csv(out, precision);
  csv.header({"s", "b", "rhs"});
  const QualityDistribution f = PowerLaw{alpha};
  for (double s : {0.5, 0.75, 0.9}) {
    for (double b : numeric::spaced_grid(1.01, 100.0, 200, true)) {
      csv.cell(s).cell(b).cell(rhs(f, s, 1.0, 1.0, b)).end_row();
    }
  }
}

inline void quality_scan(std::ostream& out, int precision, const MarketConfig& cfg, double b_lo, double b_hi) {
  const auto grid = numeric::spaced_grid(b_lo, b_hi, 400, true);
  const auto scan = competitive_vs_monopoly(cfg, grid);
  CsvWriter csv(out, precision);
  csv.header({"q", "price", "traffic", "revenue"});
  for (const auto& row : scan.rows) {
    csv.cell(row.quality).cell(row.price).cell(row.weighted_traffic).cell(row.revenue).end_row();
  }
}

/// Profitable-quality grid ends, pulled in by a relative margin so every point solves.
inline std::pair<double, double> inner_interval(const MarketConfig& cfg) {
  const auto interval = profitable_interval(cfg);
  if (!interval) throw std::logic_error("figure config has no profitable quality");
  double lo = interval->first;
  double hi = interval->second;
  lo = lo <= 1.0 ? 1.0 + 1e-3 : lo * (1.0 + 1e-9);
  hi = hi * (1.0 - 1e-9);
  return {lo, hi};
}

inline void class_evolution(std::ostream& out, int precision, const Cascade& cascade, int k,
                            const std::vector<double>& grid) {
  CsvWriter csv(out, precision);
  csv.header({"c", "price", "traffic", "revenue"});
  for (double c : grid) {
    csv.cell(c);
    if (const auto o = cascade.class_outcome(k, c)) {
      csv.cell(o->price).cell(o->weighted_traffic).cell(o->revenue);
    } else {
      csv.empty().empty().empty();
    }
    csv.end_row();
  }
}

inline void uc_real(std::ostream& out, int precision, double q_m) {
  const double threshold = uc_threshold(q_m);
  auto grid = numeric::spaced_grid(1.2 * threshold, 1.2 * threshold / 240.0, 240, false);
  CsvWriter csv(out, precision);
  csv.header({"c", "price", "traffic", "revenue"});
  for (double c : grid) {
    csv.cell(c);
    const auto r = uc_equilibrium(BoundedUcConfig{q_m, c});
    if (const auto* o = std::get_if<UcOutcome>(&r)) {
      csv.cell(o->price).cell(o->weighted_traffic).cell(o->revenue);
    } else {
      csv.empty().empty().empty();
    }
    csv.end_row();
  }
}

}  // namespace figures

/// Names of the files written by `figures`, in write order.
inline const std::vector<std::string>& figure_files() {
  static const std::vector<std::string> names{
      "lhs_sensitive.csv", "lhs_insensitive.csv", "rhs_alpha_1.csv", "rhs_alpha_minus1.csv",
      "ptraffrev_dc.csv",  "ptraffrev_uc.csv",    "ucdc_boundary.csv", "bdc_class0.csv",
      "bdc_class1.csv",    "udc_class0.csv",      "udc_class1.csv",   "uc_real.csv"};
  return names;
}

inline void write_figure(const std::string& name, std::ostream& out, int p) {
  using namespace figures;
  const double s = 2.0 / 3.0;
  if (name == "lhs_sensitive.csv") return lhs_curve(out, p, Rational{6.0, 1.0}, s, 3.0);
  if (name == "lhs_insensitive.csv") return lhs_curve(out, p, Rational{2.0, 1.0}, s, 10.0);
  if (name == "rhs_alpha_1.csv") return rhs_curves(out, p, 1.0);
  if (name == "rhs_alpha_minus1.csv") return rhs_curves(out, p, -1.0);
  if (name == "ptraffrev_dc.csv") {
    MarketConfig cfg = bdc_config();
    cfg.c = 0.5 * first_threshold(cfg.f, cfg.h, cfg.s);
    const auto [lo, hi] = inner_interval(cfg);
    return quality_scan(out, p, cfg, lo, hi);
  }
  if (name == "ptraffrev_uc.csv") {
    const MarketConfig cfg{PowerLaw{1.0}, Rational{6.0, 1.0}, 0.5, 1.0};
    const double lo = inner_interval(cfg).first;
    return quality_scan(out, p, cfg, lo, 100.0 * lo);
  }
  if (name == "ucdc_boundary.csv") {
    CsvWriter csv(out, p);
    csv.header({"alpha", "s_boundary"});
    for (int i = 1; i <= 200; ++i) {
      const double alpha = -1.0 + 4.0 * i / 200.0;
      csv.cell(alpha).cell((alpha + 1.0) / (alpha + 2.0)).end_row();
    }
    return;
  }
  if (name == "bdc_class0.csv" || name == "bdc_class1.csv") {
    const auto& cfg = bdc_config();
    const Cascade cascade(cfg.f, cfg.h, cfg.s);
    const double c0 = cascade.first_threshold();
    const auto grid = numeric::spaced_grid(1.2 * c0, 1e-3 * c0, 300, true);
    return class_evolution(out, p, cascade, name == "bdc_class0.csv" ? 0 : 1, grid);
  }
  if (name == "udc_class0.csv" || name == "udc_class1.csv") {
    const auto& cfg = udc_config();
    const Cascade cascade(cfg.f, cfg.h, cfg.s);
    const auto grid = numeric::spaced_grid(10.0, 1e-3, 300, true);
    return class_evolution(out, p, cascade, name == "udc_class0.csv" ? 0 : 1, grid);
  }
  if (name == "uc_real.csv") return uc_real(out, p, 3.0);
  throw std::logic_error("unknown figure " + name);
}

inline int cmd_figures(const RunConfig& cfg, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out.value_or("figures");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  for (const auto& name : figure_files()) {
    const fs::path path = dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path.string() + "'");
    write_figure(name, file, cfg.precision);
    file.flush();
    if (!file) throw IoError("write failed for '" + path.string() + "'");
    log << path.string() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

/// Runs one command, routing output to --out when given. Exceptions map to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.precision < 1 || cfg.precision > 17) throw ParameterError("precision must be in [1, 17]");
    const std::string& cmd = cfg.command;
    if (cmd == "figures") return cmd_figures(cfg, out);

    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.out) {
      file.open(*cfg.out, std::ios::binary);
      if (!file) throw IoError("cannot open output file '" + *cfg.out + "'");
      sink = &file;
    }
    int code = kOk;
    if (cmd == "classify") {
      code = cmd_classify(cfg, *sink);
    } else if (cmd == "ratio-limits") {
      code = cmd_ratio_limits(cfg, *sink);
    } else if (cmd == "solve") {
      code = cmd_solve(cfg, *sink);
    } else if (cmd == "cascade") {
      code = cmd_cascade(cfg, *sink);
    } else if (cmd == "sweep") {
      code = cmd_sweep(cfg, *sink);
    } else if (cmd == "uc") {
      std::ofstream side;
      std::ostream* side_sink = &err;
      if (cfg.out) {
        side.open(*cfg.out + ".json", std::ios::binary);
        if (!side) throw IoError("cannot open sidecar file '" + *cfg.out + ".json'");
        side_sink = &side;
      }
      code = cmd_uc(cfg, *sink, side_sink);
    } else {
      throw ParameterError("unknown command '" + cmd + "'");
    }
    if (file.is_open()) {
      file.flush();
      if (!file) throw IoError("write failed for '" + *cfg.out + "'");
    }
    return code;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const qosm::DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const qosm::RegimeError& e) {
    err << "error: " << e.what() << '\n';
    return kRegimeMismatch;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const qosm::DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const qosm::EmptyDemandError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const qosm::UnsupportedDistribution& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::exception& e) {
    // numeric failure (iteration cap, unexpected state)
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace qosm::cli
