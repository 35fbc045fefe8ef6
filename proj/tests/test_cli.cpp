#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "photamp/cli/commands.hpp"

using namespace photamp::cli;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig make(Command c, std::map<std::string, std::string> params = {}) {
  return resolve_defaults(RunConfig{c, std::move(params)});
}

const std::vector<double>& column(const CommandResult& r, const std::string& label) {
  for (const auto& [name, values] : r.table.series)
    if (name == label) return values;
  throw std::runtime_error("missing column " + label);
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST(ParseReal, NumbersAndPiForms) {
  EXPECT_DOUBLE_EQ(parse_real("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(parse_real(" pi "), kPi);
  EXPECT_DOUBLE_EQ(parse_real("pi/2"), kPi / 2);
  EXPECT_DOUBLE_EQ(parse_real("2pi"), 2 * kPi);
  EXPECT_DOUBLE_EQ(parse_real("3*pi/4"), 3 * kPi / 4);
  EXPECT_DOUBLE_EQ(parse_real("-pi"), -kPi);
  EXPECT_THROW(parse_real("two"), UsageError);
  EXPECT_THROW(parse_real("pi/0"), UsageError);
  EXPECT_THROW(parse_real("pi*2"), UsageError);
}

TEST(ParseHalfInteger, Forms) {
  EXPECT_EQ(parse_half_integer("3/2").twice(), 3);
  EXPECT_EQ(parse_half_integer("-1/2").twice(), -1);
  EXPECT_EQ(parse_half_integer("2").twice(), 4);
  EXPECT_EQ(parse_half_integer("1.5").twice(), 3);
  EXPECT_THROW(parse_half_integer("1/3"), UsageError);
  EXPECT_THROW(parse_half_integer("0.3"), UsageError);
}

TEST(KeyValueConfig, ParsesCommentsAndRejectsUnknownKeys) {
  std::istringstream good("# fig1 preset\nn_e = 25\n\nn=0, 10\nformat=json\n");
  const auto params = parse_key_value(good);
  EXPECT_EQ(params.at("n_e"), "25");
  EXPECT_EQ(params.at("n"), "0, 10");
  std::istringstream unknown("colour=red\n");
  EXPECT_THROW(parse_key_value(unknown), UsageError);
  std::istringstream malformed("n_e 25\n");
  EXPECT_THROW(parse_key_value(malformed), UsageError);
  EXPECT_THROW(load_config_file("/nonexistent/dir/cfg.txt"), IoError);
}

TEST(RunConfigValidation, GridAndFormat) {
  EXPECT_NO_THROW(make(Command::fig1).validate());
  EXPECT_THROW(make(Command::fig1, {{"grid_points", "1"}}).validate(), UsageError);
  EXPECT_THROW(make(Command::fig1, {{"tau_min", "2"}, {"tau_max", "1"}}).validate(), UsageError);
  EXPECT_THROW(make(Command::fig1, {{"format", "xml"}}).validate(), UsageError);
}

TEST(Fig1, DarkInputPeaksAtQuarterPeriod) {
  const auto r = run_fig1(make(Command::fig1, {{"n_e", "1"}, {"grid_points", "1025"}}));
  const auto& p = column(r, "p_ne1_n0");
  const std::size_t i = argmax(p);
  EXPECT_NEAR(r.table.key[i], kPi / 2, 1e-12);
  EXPECT_NEAR(p[i], 1.0, 1e-12);
}

TEST(Fig1, DefaultPresetsCoverPaperPanels) {
  const auto r = run_fig1(make(Command::fig1));
  EXPECT_EQ(r.table.series.size(), 12u);
  EXPECT_EQ(r.table.key.size(), 1024u);
  // P is symmetric about pi/2, so look for the first peak only.
  const auto& p = column(r, "p_ne25_n10");
  const std::vector<double> first_half(p.begin(), p.begin() + 512);
  EXPECT_NEAR(r.table.key[argmax(first_half)], std::acos(std::sqrt(10.0 / 35.0)), kPi / 1023);
  EXPECT_NEAR(r.summary["p_ne25_n10"]["perception_time"].get<double>(), 1.00685368543, 1e-10);
}

TEST(Fig1, EmptyPhotonListIsUsageError) {
  EXPECT_THROW(run_fig1(make(Command::fig1, {{"n", ""}})), UsageError);
  std::ostringstream out, err;
  EXPECT_EQ(execute(RunConfig{Command::fig1, {{"n", ""}}}, out, err), kUsage);
}

TEST(Fig2, PeakIsVacuumWeightAndFallsWithIntensity) {
  const auto r = run_fig2(make(Command::fig2, {{"n_e", "25"}, {"intensity", "0.1,0.5,0.9"}, {"grid_points", "1025"}}));
  double previous = 2.0;
  for (const char* tag : {"0.1", "0.5", "0.9"}) {
    const auto& p = column(r, std::string("p_ne25_a2_") + tag);
    const std::size_t i = argmax(p);
    EXPECT_NEAR(r.table.key[i], kPi / 2, 1e-12);
    EXPECT_NEAR(p[i], std::exp(-std::stod(tag)), 1e-9);
    EXPECT_LT(p[i], previous);
    previous = p[i];
  }
}

TEST(Fig2, VacuumReproducesDarkCurve) {
  const auto a = run_fig2(make(Command::fig2, {{"n_e", "10"}, {"intensity", "0"}}));
  const auto b = run_fig1(make(Command::fig1, {{"n_e", "10"}, {"n", "0"}}));
  EXPECT_EQ(column(a, "p_ne10_a2_0"), column(b, "p_ne10_n0"));
}

TEST(Fig2, WarnsOutsideLowIntensityRegime) {
  const auto r = run_fig2(make(Command::fig2, {{"n_e", "3"}, {"intensity", "1.5"}, {"grid_points", "8"}}));
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(Fig3, BackgroundPeaksAndWidths) {
  const auto r = run_fig3(make(Command::fig3, {{"grid_points", "2049"}}));
  for (const char* tag : {"a2_0.1", "a2_0.5"}) {
    const auto& s = r.summary[tag];
    EXPECT_NEAR(s["mixed_background"].get<double>(), 1.0 / 26.0, 1e-12);
    EXPECT_NEAR(s["pure_peak_value"].get<double>(), s["mixed_peak_value"].get<double>(), 1e-9);
    EXPECT_GT(s["mixed_fwhm"].get<double>(), s["pure_fwhm"].get<double>());
  }
  EXPECT_THROW(run_fig3(make(Command::fig3, {{"n_e", "3,4"}})), UsageError);
}

TEST(Wigner, EmitsRotationElement) {
  const auto r = run_wigner(make(Command::wigner, {{"j", "1/2"}, {"m_prime", "1/2"}, {"m", "1/2"}, {"grid_points", "5"}}));
  const auto& d = column(r, "d");
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], std::cos(r.table.key[i]), 1e-15);
  EXPECT_THROW(run_wigner(make(Command::wigner, {{"j", "1"}, {"m_prime", "2"}, {"m", "0"}})), UsageError);
  EXPECT_THROW(run_wigner(make(Command::wigner, {{"j", "1"}})), UsageError);
}

TEST(ExactCompare, DeviationsShrinkWithN) {
  const auto r = run_exact_compare(make(Command::exact_compare, {{"grid_points", "256"}}));
  EXPECT_EQ(r.exit_code, kSuccess);
  EXPECT_TRUE(r.summary["monotone"].get<bool>());
  EXPECT_LT(r.summary["max_deviation"]["4000"].get<double>(), r.summary["max_deviation"]["500"].get<double>());
  EXPECT_EQ(r.table.series.size(), 5u);
}

TEST(ExactCompare, SingleAtomAgreesExactly) {
  const auto r = run_exact_compare(make(Command::exact_compare, {{"N", "1"}, {"n_e", "1"}, {"n", "0"}}));
  EXPECT_LT(r.summary["overall_max_deviation"].get<double>(), 1e-10);
  EXPECT_EQ(r.exit_code, kSuccess);
}

TEST(ExactCompare, MonotoneCheck) {
  EXPECT_EQ(first_non_decreasing_step({0.3, 0.2, 0.1}), 0u);
  EXPECT_EQ(first_non_decreasing_step({0.3, 0.2, 0.25}), 2u);
  EXPECT_EQ(first_non_decreasing_step({0.3, 0.3}), 1u);
  EXPECT_EQ(first_non_decreasing_step({1e-15, 2e-15, 1e-15}), 0u);
  EXPECT_EQ(first_non_decreasing_step({0.1}), 0u);
  EXPECT_THROW(run_exact_compare(make(Command::exact_compare, {{"N", ""}})), UsageError);
}

TEST(ExactCompare, OneExcitationSectorPassesAtFloor) {
  const auto r = run_exact_compare(make(Command::exact_compare, {{"N", "500,4000"}, {"n_e", "1"}, {"n", "0"}}));
  EXPECT_EQ(r.exit_code, kSuccess);
}

TEST(Discriminate, RecoversPhotonNumber) {
  const auto r = run_discriminate(make(Command::discriminate, {{"n_e", "10"}, {"observed", "0.9553"}}));
  EXPECT_EQ(r.summary["inferred_n"].get<unsigned>(), 5u);
  EXPECT_EQ(r.table.key.size(), 11u);
  EXPECT_THROW(run_discriminate(make(Command::discriminate)), UsageError);
}

TEST(Sweep, RowsPerPair) {
  const auto r = run_sweep(make(Command::sweep));
  EXPECT_EQ(r.table.key.size(), 12u);
  const auto& thr = column(r, "tau_threshold");
  EXPECT_NEAR(thr[0], std::asin(0.1), 1e-12);  // n_e = 1, n = 0
}

TEST(Output, CsvHeaderAndPrecision) {
  Table t;
  t.key = {0.0, 1.0 / 3.0};
  t.add("p_a", {1.0, 2.0 / 3.0});
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "tau,p_a\n0,1\n0.333333333333,0.666666666667\n");
}

TEST(Output, JsonEmbedsConfig) {
  const auto config = make(Command::fig1, {{"n_e", "1"}, {"n", "0"}, {"grid_points", "3"}, {"format", "json"}});
  std::ostringstream out, err;
  ASSERT_EQ(execute(config, out, err), kSuccess);
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["config"]["command"], "fig1");
  EXPECT_EQ(doc["config"]["parameters"]["grid_points"], "3");
  EXPECT_EQ(doc["tau"].size(), 3u);
  EXPECT_EQ(doc["series"]["p_ne1_n0"].size(), 3u);
  EXPECT_TRUE(doc["summary"].contains("p_ne1_n0"));
}

TEST(Output, DeterministicAcrossRuns) {
  const auto config = make(Command::fig3, {{"grid_points", "64"}, {"format", "json"}});
  std::ostringstream a, b, err;
  execute(config, a, err);
  execute(config, b, err);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Output, UnwritablePathIsIoError) {
  std::ostringstream out, err;
  const RunConfig config{Command::fig1, {{"output_path", "/nonexistent/dir/out.csv"}, {"grid_points", "4"}}};
  EXPECT_EQ(execute(config, out, err), kIo);
}
