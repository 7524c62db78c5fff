#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qacc/harness.hpp"

using namespace qacc;

namespace {

std::string csv_of(const VerificationReport& r) {
  std::ostringstream os;
  write_csv(r, os);
  return os.str();
}

std::size_t count_char(const std::string& s, char c) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), c));
}

}  // namespace

TEST(Config, ParsesTextWithCommentsAndRepeats) {
  const auto pairs = parse_config_text(
      "# sample\n"
      "scenario = example3   # trailing\n"
      "\n"
      "--param = omega0=2\n"
      "param = nu0 = 0.5\n"
      "t1 = 2pi\n"
      "sweep-dim = 2, 3\n"
      "sweep-dim = 5\n");
  RunConfig c;
  for (const auto& [k, v] : pairs) apply_setting(c, k, v);
  EXPECT_EQ(c.scenario, "example3");
  EXPECT_EQ(c.params.at("omega0"), 2.0);
  EXPECT_EQ(c.params.at("nu0"), 0.5);
  EXPECT_DOUBLE_EQ(c.t1, 2.0 * std::numbers::pi);
  EXPECT_EQ(c.sweep_dims, (std::vector<long>{2, 3, 5}));
}

TEST(Config, RejectsBadInput) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(c, "samples", "12x"), ConfigError);
  EXPECT_THROW(apply_setting(c, "t0", ""), ConfigError);
  EXPECT_THROW(apply_setting(c, "format", "xml"), ConfigError);
  EXPECT_THROW(apply_setting(c, "param", "novalue"), ConfigError);
  EXPECT_THROW(parse_config_text("just words\n"), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/dir/run.cfg"), IoError);
}

TEST(Config, ValidationRules) {
  RunConfig c;
  c.t1 = c.t0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.samples = 1;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.dt_propagate = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.hbar = 2.0;
  EXPECT_THROW(validate(c), ConfigError);
  c.convention = "pati";
  EXPECT_NO_THROW(validate(c));
}

TEST(Run, UnknownScenarioIsConfigError) {
  RunConfig c;
  c.scenario = "nonesuch";
  EXPECT_THROW(run(c), ConfigError);
}

TEST(Run, CosineScenarioHistogram) {
  RunConfig c;
  c.scenario = "example3";
  const VerificationReport r = run(c);
  ASSERT_EQ(r.samples.size(), 201u);
  EXPECT_EQ(r.summary.histogram.size(), 2u);
  EXPECT_EQ(r.summary.degenerate_count, r.summary.histogram.at("Degenerate"));
  EXPECT_EQ(r.summary.histogram.at("SaturationWithMax") + r.summary.degenerate_count, 201u);
  EXPECT_LE(r.summary.degenerate_count, 2u);
  EXPECT_EQ(r.summary.violations, 0u);
  EXPECT_LT(r.summary.max_fd_error, 1e-5);
  EXPECT_NEAR(r.samples.back().limits.t, 2.0 * std::numbers::pi, 0.0);
}

TEST(Run, OrthogonalScenarioSlacks) {
  RunConfig c;
  const VerificationReport r = run(c);
  EXPECT_EQ(r.summary.violations, 0u);
  EXPECT_EQ(r.summary.histogram.at("NoSaturation_Orth"), 201u);
  EXPECT_GE(*r.summary.min_slack_tight, -1e-6);
  // Strict loose slack at generic samples; the tight bound is met with equality.
  const LimitSample& s = r.samples[30].limits;
  EXPECT_GT(*s.slack_loose, 1e-3);
  EXPECT_LT(std::fabs(*s.slack_tight), 1e-6);
}

TEST(Run, CustomStationaryFieldIsQuiet) {
  RunConfig c;
  c.scenario = "custom";
  c.samples = 11;
  c.t1 = 1.0;
  const VerificationReport r = run(c);
  for (const ReportSample& s : r.samples) {
    EXPECT_NEAR(s.limits.v, 1.0, 1e-12);
    EXPECT_LT(std::fabs(*s.limits.a_analytic), 1e-9);
    EXPECT_LT(std::fabs(*s.limits.a_fd), 1e-9);
    EXPECT_LT(s.limits.bound_loose, 1e-9);
    EXPECT_LT(*s.limits.bound_tight, 1e-9);
  }
  c.params["bogus"] = 1.0;
  EXPECT_THROW(run(c), ConfigError);
}

TEST(Sweep, NoViolationsAndErrors) {
  RunConfig c;
  c.sweep_dims = {2, 5};
  c.sweep_count = 200;
  const VerificationReport r = run(c);
  EXPECT_EQ(r.mode, "sweep");
  EXPECT_EQ(r.samples.size(), 400u);
  EXPECT_EQ(r.summary.violations, 0u);
  EXPECT_GE(*r.summary.min_robertson_slack, -1e-10);
  EXPECT_GE(*r.summary.min_rs_slack, -1e-10);
  EXPECT_GE(*r.summary.min_slack_tight, -1e-6);

  c.sweep_count = 0;
  EXPECT_THROW(run(c), ConfigError);
  c.sweep_count = 10;
  c.sweep_dims = {1};
  EXPECT_THROW(run(c), ConfigError);
}

TEST(Report, SummaryIsRecomputable) {
  RunConfig c;
  c.scenario = "example2";
  c.t1 = 1.0;
  c.samples = 21;
  const VerificationReport r = run(c);
  const ReportSummary again = summarize(r.samples);
  EXPECT_EQ(again.histogram, r.summary.histogram);
  EXPECT_EQ(again.min_slack_loose, r.summary.min_slack_loose);
  EXPECT_EQ(again.max_fd_error, r.summary.max_fd_error);
  EXPECT_EQ(r.summary.histogram.at("SaturationWithoutMax"), 21u);
}

TEST(Report, ViolationDetection) {
  ReportSample s;
  s.limits.slack_loose = -2e-6;
  EXPECT_TRUE(sample_violates(s));
  s.limits.slack_loose = -5e-7;
  EXPECT_FALSE(sample_violates(s));
  s.rs_slack = -1e-9;
  EXPECT_TRUE(sample_violates(s));
}

TEST(Csv, FixedColumnsAndEmptyDegenerateFields) {
  RunConfig c;
  c.scenario = "example3";
  c.samples = 5;
  c.t1 = std::numbers::pi;
  const std::string csv = csv_of(run(c));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  bool saw_degenerate = false;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(count_char(line, ','), 11u) << line;
    if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") {
      saw_degenerate = true;
      // t,v,,,bound_loose,,,,...
      EXPECT_NE(line.find(",,,"), std::string::npos);
      EXPECT_EQ(line.find("nan"), std::string::npos);
    }
  }
  EXPECT_EQ(rows, 5);
  EXPECT_TRUE(saw_degenerate);
}

TEST(Csv, SeventeenDigitRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

TEST(Output, DeterministicFilesAndJson) {
  const auto dir = std::filesystem::temp_directory_path() / "qacc_harness_test";
  std::filesystem::create_directories(dir);
  RunConfig c;
  c.sweep_dims = {3};
  c.sweep_count = 20;
  c.seed = 7;
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  c.output_path = (dir / "a.csv").string();
  run(c);
  c.output_path = (dir / "b.csv").string();
  run(c);
  EXPECT_EQ(read(dir / "a.csv"), read(dir / "b.csv"));

  c.format = OutputFormat::Json;
  c.output_path = (dir / "r.json").string();
  run(c);
  const auto j = nlohmann::json::parse(read(dir / "r.json"));
  EXPECT_EQ(j["mode"], "sweep");
  EXPECT_EQ(j["samples"].size(), 20u);
  EXPECT_EQ(j["summary"]["violations"], 0);

  c.output_path = (dir / "missing" / "x.csv").string();
  EXPECT_THROW(run(c), IoError);
  std::filesystem::remove_all(dir);
}
