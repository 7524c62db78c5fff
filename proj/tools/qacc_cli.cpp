// qacc: evaluate quantum acceleration limits on a scenario grid or a random sweep.
//
// Exit codes: 0 success, 1 bound violation, 2 configuration or I/O error,
// 3 numerical error.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qacc/qacc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_summary(const qacc::VerificationReport& r, std::ostream& os) {
  const auto& s = r.summary;
  auto opt = [](const std::optional<double>& v) {
    return v ? qacc::format_real(*v) : std::string("n/a");
  };
  os << "mode: " << r.mode << "\n"
     << "samples: " << s.sample_count << "\n"
     << "max |a_fd - a_analytic|: " << qacc::format_real(s.max_fd_error) << "\n"
     << "min slack_loose: " << opt(s.min_slack_loose) << "\n"
     << "min slack_tight: " << opt(s.min_slack_tight) << "\n";
  if (r.mode == "sweep") {
    os << "min robertson slack: " << opt(s.min_robertson_slack) << "\n"
       << "min robertson-schrodinger slack: " << opt(s.min_rs_slack) << "\n";
  }
  os << "degenerate samples: " << s.degenerate_count << "\n";
  for (const auto& [row, count] : s.histogram) os << "  " << row << ": " << count << "\n";
  os << "violations: " << s.violations << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum acceleration limits: scenario runs and random property sweeps"};
  app.option_defaults()->always_capture_default();

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> settings;
  app.add_option("--config", config_path, "Flat key = value configuration file");

  // Every flag below is forwarded to qacc::apply_setting under its long name,
  // after the config file, so flags override file values.
  const std::vector<std::pair<std::string, std::string>> scalar_flags = {
      {"scenario", "example1 | example2 | example3 | custom"},
      {"t0", "Grid start time"},
      {"t1", "Grid end time (accepts e.g. 2pi)"},
      {"samples", "Number of grid samples (>= 2)"},
      {"dt", "Propagation time step"},
      {"fd-dt", "Finite-difference step of the acceleration oracle"},
      {"convention", "pati | alsing-cafaro"},
      {"hbar", "Planck constant (pati convention only)"},
      {"format", "csv | json"},
      {"out", "Output file (default: data on stdout, summary on stderr)"},
      {"seed", "Seed of the random sweep"},
      {"sweep-count", "Random (field, state) pairs per sweep dimension"}};
  std::vector<std::string> scalar_values(scalar_flags.size());
  std::vector<CLI::Option*> scalar_opts;
  for (std::size_t i = 0; i < scalar_flags.size(); ++i) {
    scalar_opts.push_back(
        app.add_option("--" + scalar_flags[i].first, scalar_values[i], scalar_flags[i].second));
  }
  std::vector<std::string> params;
  std::vector<std::string> sweep_dims;
  app.add_option("--param", params, "Scenario parameter key=value (repeatable)");
  app.add_option("--sweep-dim", sweep_dims, "Sweep dimension (repeatable); selects sweep mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  qacc::RunConfig config;
  try {
    if (!config_path.empty()) config = qacc::load_config_file(config_path);
    for (std::size_t i = 0; i < scalar_flags.size(); ++i) {
      if (scalar_opts[i]->count() > 0) {
        qacc::apply_setting(config, scalar_flags[i].first, scalar_values[i]);
      }
    }
    for (const auto& p : params) qacc::apply_setting(config, "param", p);
    if (!sweep_dims.empty()) config.sweep_dims.clear();
    for (const auto& d : sweep_dims) qacc::apply_setting(config, "sweep-dim", d);

    qacc::VerificationReport report = qacc::execute(config);
    if (config.output_path.empty()) {
      qacc::write_report(report, config, std::cout);
      print_summary(report, std::cerr);
    } else {
      qacc::write_report_file(report, config);
      print_summary(report, std::cout);
    }
    return report.bound_violated() ? kExitViolation : kExitOk;
  } catch (const qacc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qacc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qacc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
