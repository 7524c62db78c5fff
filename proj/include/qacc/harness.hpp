#pragma once

// Configuration-driven runner behind the command-line tool: evaluates the
// acceleration limits along a time grid (scenario mode) or over random
// fields and states (sweep mode), and serializes the resulting report.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qacc/bloch.hpp"
#include "qacc/dynamics.hpp"
#include "qacc/errors.hpp"
#include "qacc/limits.hpp"
#include "qacc/random.hpp"
#include "qacc/scenarios.hpp"
#include "qacc/uncertainty.hpp"

namespace qacc {

namespace tol {
/// Bound slack below -bound_violation fails a run.
inline constexpr double bound_violation = 1e-6;
}  // namespace tol

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string scenario = "example1";
  std::map<std::string, double> params;
  double t0 = 0.0;
  double t1 = 2.0 * std::numbers::pi;
  long samples = 201;
  double dt_propagate = 1e-4;
  std::string convention = "alsing-cafaro";
  double hbar = 1.0;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path;  ///< empty: caller decides where the data goes
  std::uint64_t seed = 42;
  std::vector<long> sweep_dims;  ///< non-empty selects sweep mode
  long sweep_count = 1000;
  double fd_dt = tol::fd_dt;
};

// ---------------------------------------------------------------------------
// Parsing

/// Parses a real number; accepts a trailing "pi" factor ("pi", "2pi", "0.5pi").
inline double parse_real(const std::string& key, std::string text) {
  double factor = 1.0;
  if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    text.resize(text.size() - 2);
    if (text.empty() || text == "+") text = "1";
    if (text == "-") text = "-1";
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError("invalid number '" + text + "' for key '" + key + "'");
  }
  return v * factor;
}

inline long parse_integer(const std::string& key, const std::string& text) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid integer '" + text + "' for key '" + key + "'");
  }
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Applies one setting; keys match the long command-line flag names.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "scenario") {
    c.scenario = value;
  } else if (key == "param") {
    const auto eq = value.find('=');
    if (eq == std::string::npos) throw ConfigError("param expects key=value, got '" + value + "'");
    const std::string name = trim(value.substr(0, eq));
    if (name.empty()) throw ConfigError("param has an empty key");
    c.params[name] = parse_real(name, trim(value.substr(eq + 1)));
  } else if (key == "t0") {
    c.t0 = parse_real(key, value);
  } else if (key == "t1") {
    c.t1 = parse_real(key, value);
  } else if (key == "samples") {
    c.samples = parse_integer(key, value);
  } else if (key == "dt") {
    c.dt_propagate = parse_real(key, value);
  } else if (key == "fd-dt") {
    c.fd_dt = parse_real(key, value);
  } else if (key == "convention") {
    if (value != "pati" && value != "alsing-cafaro") {
      throw ConfigError("convention must be 'pati' or 'alsing-cafaro', got '" + value + "'");
    }
    c.convention = value;
  } else if (key == "hbar") {
    c.hbar = parse_real(key, value);
  } else if (key == "format") {
    if (value == "csv") {
      c.format = OutputFormat::Csv;
    } else if (value == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw ConfigError("format must be 'csv' or 'json', got '" + value + "'");
    }
  } else if (key == "out") {
    c.output_path = value;
  } else if (key == "seed") {
    const long s = parse_integer(key, value);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "sweep-dim") {
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) c.sweep_dims.push_back(parse_integer(key, trim(item)));
  } else if (key == "sweep-count") {
    c.sweep_count = parse_integer(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Flat "key = value" text with '#' comments. Keys may repeat (param, sweep-dim).
inline std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  for (const auto& [k, v] : parse_config_text(buf.str())) apply_setting(base, k, v);
  return base;
}

inline Convention make_convention(const RunConfig& c) {
  if (c.convention == "pati") return Convention::pati(c.hbar);
  if (c.convention == "alsing-cafaro") {
    if (c.hbar != 1.0) throw ConfigError("the alsing-cafaro convention fixes hbar = 1");
    return Convention::alsing_cafaro();
  }
  throw ConfigError("unknown convention '" + c.convention + "'");
}

inline void validate(const RunConfig& c) {
  if (!(c.t1 > c.t0)) throw ConfigError("t1 must exceed t0");
  if (c.samples < 2) throw ConfigError("samples must be at least 2");
  if (!(c.dt_propagate > 0.0)) throw ConfigError("dt must be positive");
  if (!(c.fd_dt > 0.0)) throw ConfigError("fd-dt must be positive");
  if (!std::isfinite(c.t0) || !std::isfinite(c.t1)) throw ConfigError("time grid must be finite");
  make_convention(c);
}

// ---------------------------------------------------------------------------
// Report

struct ReportSample {
  LimitSample limits;
  std::optional<SaturationTag> tag;        ///< qubit runs only
  std::optional<double> robertson_slack;   ///< sweep mode only
  std::optional<double> rs_slack;          ///< sweep mode only
};

struct ReportSummary {
  std::size_t sample_count = 0;
  double max_fd_error = 0.0;  ///< max |a_fd - a_analytic|
  std::optional<double> min_slack_loose;
  std::optional<double> min_slack_tight;
  std::optional<double> min_robertson_slack;
  std::optional<double> min_rs_slack;
  std::map<std::string, std::size_t> histogram;  ///< table row name -> count
  std::size_t degenerate_count = 0;
  std::size_t violations = 0;
};

struct VerificationReport {
  std::string mode;  ///< "scenario" or "sweep"
  std::vector<ReportSample> samples;
  ReportSummary summary;

  bool bound_violated() const { return summary.violations > 0; }
};

namespace detail {

inline void keep_min(std::optional<double>& slot, std::optional<double> v) {
  if (v && (!slot || *v < *slot)) slot = v;
}

}  // namespace detail

inline bool sample_violates(const ReportSample& s) {
  const auto bad = [](const std::optional<double>& v, double lim) { return v && *v < -lim; };
  return bad(s.limits.slack_loose, tol::bound_violation) ||
         bad(s.limits.slack_tight, tol::bound_violation) ||
         bad(s.robertson_slack, tol::inequality_abs) || bad(s.rs_slack, tol::inequality_abs);
}

/// Every summary field is a function of the sample list.
inline ReportSummary summarize(const std::vector<ReportSample>& samples) {
  ReportSummary sum;
  sum.sample_count = samples.size();
  for (const auto& s : samples) {
    const LimitSample& l = s.limits;
    if (l.a_fd && l.a_analytic) {
      sum.max_fd_error = std::max(sum.max_fd_error, std::fabs(*l.a_fd - *l.a_analytic));
    }
    detail::keep_min(sum.min_slack_loose, l.slack_loose);
    detail::keep_min(sum.min_slack_tight, l.slack_tight);
    detail::keep_min(sum.min_robertson_slack, s.robertson_slack);
    detail::keep_min(sum.min_rs_slack, s.rs_slack);
    if (l.degenerate) ++sum.degenerate_count;
    if (s.tag) ++sum.histogram[std::string(to_string(s.tag->row))];
    if (sample_violates(s)) ++sum.violations;
  }
  return sum;
}

/// Frame of a qubit state under a 2x2 field at time t.
inline BlochFrame qubit_frame(const TimeField& field, const StateVector& psi, double t) {
  const QubitField f = operator_to_field(field.hamiltonian(t));
  const QubitField r = operator_to_field(field.derivative(t));
  return {state_to_bloch(psi), f.h, r.h, f.h0};
}

inline ReportSample make_sample(const TimeField& field, const StateVector& psi, double t,
                                const Convention& conv, double fd_dt) {
  ReportSample s;
  s.limits = evaluate_limits(field, psi, t, conv, fd_dt);
  if (psi.dim() == 2) s.tag = classify(qubit_frame(field, psi, t));
  return s;
}

// ---------------------------------------------------------------------------
// Scenario mode

/// A field together with the state it starts from at t = 0.
struct Problem {
  TimeField field;
  StateVector psi0;
};

/// Custom qubit field h(t) = c + r t + sin(w t) A with h0 constant, started
/// from the Bloch angles (theta, phi). Keys: h0 hx hy hz rx ry rz ax ay az w theta phi.
inline Problem custom_problem(const std::map<std::string, double>& params) {
  static const char* const kKeys[] = {"h0", "hx", "hy", "hz", "rx", "ry", "rz",
                                      "ax", "ay", "az", "w",  "theta", "phi"};
  for (const auto& [k, v] : params) {
    bool known = false;
    for (const char* key : kKeys) known = known || k == key;
    if (!known) throw ConfigError("unknown parameter '" + k + "' for the custom scenario");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' must be finite");
  }
  auto get = [&params](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const double h0 = get("h0", 0.0);
  const Vec3 c{get("hx", 0.0), get("hy", 0.0), get("hz", 1.0)};
  const Vec3 r{get("rx", 0.0), get("ry", 0.0), get("rz", 0.0)};
  const Vec3 amp{get("ax", 0.0), get("ay", 0.0), get("az", 0.0)};
  const double w = get("w", 1.0);
  const double theta = get("theta", std::numbers::pi / 2.0);
  const double phi = get("phi", 0.0);

  TimeField field = qubit_time_field(
      [=](double t) { return QubitField{h0, c + t * r + std::sin(w * t) * amp}; },
      [=](double t) { return QubitField{0.0, r + (w * std::cos(w * t)) * amp}; });
  const BlochVector a0(Vec3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta)});
  return {std::move(field), bloch_to_state(a0)};
}

inline Problem resolve_problem(const RunConfig& c) {
  if (c.scenario == "custom") return custom_problem(c.params);
  const Scenario s = make_scenario(c.scenario, c.params);
  return {s.time_field(), s.initial_state()};
}

/// Samples the limits on the grid t0 + k (t1 - t0) / (samples - 1) along the
/// trajectory propagated from t = 0.
inline VerificationReport run_problem(const Problem& p, const RunConfig& c) {
  validate(c);
  const Convention conv = make_convention(c);
  VerificationReport report;
  report.mode = "scenario";
  report.samples.reserve(static_cast<std::size_t>(c.samples));

  StateVector psi = evolve(p.field, p.psi0, 0.0, c.t0, c.dt_propagate).value;
  double t_prev = c.t0;
  const double span = c.t1 - c.t0;
  for (long k = 0; k < c.samples; ++k) {
    const double t = k + 1 == c.samples
                         ? c.t1
                         : c.t0 + span * static_cast<double>(k) / static_cast<double>(c.samples - 1);
    psi = evolve(p.field, psi, t_prev, t, c.dt_propagate).value;
    t_prev = t;
    report.samples.push_back(make_sample(p.field, psi, t, conv, c.fd_dt));
  }
  report.summary = summarize(report.samples);
  return report;
}

// ---------------------------------------------------------------------------
// Sweep mode

/// Random smooth field H(t) = H0 + t H1 + sin(w t) H2, or lambda(t) H0 with
/// lambda(t) = l0 + l1 sin(w t + p) and l0 > |l1| > 0.
inline TimeField random_field(Eigen::Index n, Rng& rng, bool scaled_family) {
  if (scaled_family) {
    const HermitianOperator h0 = random_hermitian(n, rng);
    const double l0 = uniform(rng, 1.0, 2.0);
    const double l1 = uniform(rng, -0.9, 0.9);
    const double w = uniform(rng, 0.5, 3.0);
    const double ph = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    TimeField f;
    f.hamiltonian_at = [=](double t) { return (l0 + l1 * std::sin(w * t + ph)) * h0; };
    f.derivative_at = [=](double t) { return (l1 * w * std::cos(w * t + ph)) * h0; };
    return f;
  }
  const HermitianOperator h0 = random_hermitian(n, rng);
  const HermitianOperator h1 = random_hermitian(n, rng);
  const HermitianOperator h2 = random_hermitian(n, rng);
  const double w = uniform(rng, 0.5, 3.0);
  TimeField f;
  f.hamiltonian_at = [=](double t) { return h0 + t * h1 + std::sin(w * t) * h2; };
  f.derivative_at = [=](double t) { return h1 + (w * std::cos(w * t)) * h2; };
  return f;
}

inline VerificationReport random_sweep(const RunConfig& c) {
  if (c.sweep_dims.empty()) throw ConfigError("sweep needs at least one dimension");
  if (c.sweep_count < 1) throw ConfigError("sweep-count must be at least 1");
  for (long n : c.sweep_dims) {
    if (n < 2 || n > 64) throw ConfigError("sweep dimensions must lie in [2, 64]");
  }
  if (!(c.fd_dt > 0.0)) throw ConfigError("fd-dt must be positive");
  const Convention conv = make_convention(c);

  Rng rng(c.seed);
  VerificationReport report;
  report.mode = "sweep";
  for (long n : c.sweep_dims) {
    for (long k = 0; k < c.sweep_count; ++k) {
      const TimeField field = random_field(n, rng, k % 2 == 1);
      const double t = uniform(rng, 0.0, 1.0);
      const StateVector psi = random_state(n, rng);
      ReportSample s = make_sample(field, psi, t, conv, c.fd_dt);
      const HermitianOperator h = field.hamiltonian(t);
      const HermitianOperator hdot = field.derivative(t);
      s.robertson_slack = robertson(h, hdot, psi).slack;
      s.rs_slack = robertson_schrodinger(h, hdot, psi).slack;
      report.samples.push_back(std::move(s));
    }
  }
  report.summary = summarize(report.samples);
  return report;
}

inline VerificationReport execute(const RunConfig& c) {
  return c.sweep_dims.empty() ? run_problem(resolve_problem(c), c) : random_sweep(c);
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr const char* kCsvHeader =
    "t,v,a_analytic,a_fd,bound_loose,bound_tight,slack_loose,slack_tight,a_dot_h,"
    "hperp_cross_hdotperp_norm,tag,degenerate_flag";

/// 17 significant digits, locale-independent.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

inline void write_csv(const VerificationReport& r, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& s : r.samples) {
    const LimitSample& l = s.limits;
    os << format_real(l.t) << ',' << format_real(l.v) << ',' << format_real(l.a_analytic) << ','
       << format_real(l.a_fd) << ',' << format_real(l.bound_loose) << ','
       << format_real(l.bound_tight) << ',' << format_real(l.slack_loose) << ','
       << format_real(l.slack_tight) << ',';
    if (s.tag) {
      os << format_real(s.tag->a_dot_h) << ',' << format_real(s.tag->cross_norm) << ','
         << to_string(s.tag->row);
    } else {
      os << ",,";
    }
    os << ',' << (l.degenerate ? 1 : 0) << '\n';
  }
}

namespace detail {

inline nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const ReportSummary& s) {
  nlohmann::json j;
  j["sample_count"] = s.sample_count;
  j["max_fd_error"] = s.max_fd_error;
  j["min_slack_loose"] = detail::opt_json(s.min_slack_loose);
  j["min_slack_tight"] = detail::opt_json(s.min_slack_tight);
  j["min_robertson_slack"] = detail::opt_json(s.min_robertson_slack);
  j["min_rs_slack"] = detail::opt_json(s.min_rs_slack);
  j["histogram"] = s.histogram;
  j["degenerate_count"] = s.degenerate_count;
  j["violations"] = s.violations;
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r, const RunConfig& c) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["config"] = {{"scenario", c.scenario}, {"params", c.params},   {"t0", c.t0},
                 {"t1", c.t1},             {"samples", c.samples}, {"dt", c.dt_propagate},
                 {"fd_dt", c.fd_dt},       {"convention", c.convention},
                 {"hbar", c.hbar},         {"seed", c.seed},       {"sweep_dims", c.sweep_dims},
                 {"sweep_count", c.sweep_count}};
  auto& arr = j["samples"] = nlohmann::json::array();
  for (const auto& s : r.samples) {
    const LimitSample& l = s.limits;
    nlohmann::json e = {{"t", l.t},
                        {"v", l.v},
                        {"a_analytic", detail::opt_json(l.a_analytic)},
                        {"a_fd", detail::opt_json(l.a_fd)},
                        {"bound_loose", l.bound_loose},
                        {"bound_tight", detail::opt_json(l.bound_tight)},
                        {"slack_loose", detail::opt_json(l.slack_loose)},
                        {"slack_tight", detail::opt_json(l.slack_tight)},
                        {"degenerate", l.degenerate}};
    if (s.tag) {
      e["a_dot_h"] = s.tag->a_dot_h;
      e["hperp_cross_hdotperp_norm"] = s.tag->cross_norm;
      e["tag"] = std::string(to_string(s.tag->row));
    }
    if (s.robertson_slack) e["robertson_slack"] = *s.robertson_slack;
    if (s.rs_slack) e["rs_slack"] = *s.rs_slack;
    arr.push_back(std::move(e));
  }
  j["summary"] = to_json(r.summary);
  return j;
}

inline void write_report(const VerificationReport& r, const RunConfig& c, std::ostream& os) {
  if (c.format == OutputFormat::Csv) {
    write_csv(r, os);
  } else {
    os << to_json(r, c).dump(2) << '\n';
  }
}

inline void write_report_file(const VerificationReport& r, const RunConfig& c) {
  std::ofstream out(c.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file '" + c.output_path + "'");
  write_report(r, c, out);
  out.flush();
  if (!out) throw IoError("failed writing output file '" + c.output_path + "'");
}

/// Runs the configured mode and writes the output file when one is set.
inline VerificationReport run(const RunConfig& c) {
  VerificationReport r = execute(c);
  if (!c.output_path.empty()) write_report_file(r, c);
  return r;
}

}  // namespace qacc
