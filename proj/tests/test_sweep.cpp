#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "tdt/sweep.hpp"

namespace {

using namespace tdt;
namespace sw = tdt::sweep;

sw::SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return sw::parse_config(in);
}

const char* kSmall =
    "# two-axis slice\n"
    "axis = lambda 0.2 1.0 3\n"
    "axis = theta -1 2.5 4\n"
    "gamma = 0.9\n"
    "j_ratio = 0.1\n"
    "outputs = order_params, phase, n_ph, i_ph, h_exp, spectrum\n"
    "n_starts = 16\n"
    "seed = 5\n";

std::string render(const sw::SweepConfig& cfg, unsigned jobs = 1) {
  std::ostringstream os;
  sw::run_sweep(cfg, os, jobs);
  return os.str();
}

TEST(SweepConfig, Parses) {
  const auto cfg = parse(kSmall);
  ASSERT_EQ(cfg.axes.size(), 2u);
  EXPECT_EQ(cfg.axes[1].name, "theta");
  EXPECT_EQ(cfg.axes[1].steps, 4);
  EXPECT_EQ(cfg.outputs.size(), 6u);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(sw::record_count(cfg), 12u);
}

TEST(SweepConfig, GridOrderFirstAxisSlowest) {
  const auto cfg = parse(kSmall);
  EXPECT_DOUBLE_EQ(sw::point(cfg, 0).lambda, 0.2);
  EXPECT_DOUBLE_EQ(sw::point(cfg, 0).theta, -1.0);
  EXPECT_DOUBLE_EQ(sw::point(cfg, 1).theta, 0.16666666666666674);
  EXPECT_DOUBLE_EQ(sw::point(cfg, 4).lambda, 0.6);
  EXPECT_DOUBLE_EQ(sw::point(cfg, 11).theta, 2.5);
}

TEST(SweepConfig, RejectsInvalid) {
  EXPECT_THROW(parse("axis = lambda 0 1\n"), sw::ConfigError);
  EXPECT_THROW(parse("frobnicate = 3\n"), sw::ConfigError);
  EXPECT_THROW(parse("gamma = abc\n"), sw::ConfigError);
  EXPECT_THROW(parse("just words\n"), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("gamma = 1\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = lambda 0 1 1\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = omega 0 1 3\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = lambda 0 1 3\naxis = lambda 0 1 3\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = lambda 0 1 3\noutputs = colour\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = lambda 0 1 3\ngamma = -1\n")), sw::ConfigError);
  EXPECT_THROW(sw::validate(parse("axis = lambda 0 1 3\nformat = xml\n")), sw::ConfigError);
}

TEST(Sweep, TextDatasetRoundTrips) {
  const auto cfg = parse(kSmall);
  const std::string first = render(cfg);
  std::istringstream back(first);
  const auto again = sw::parse_config(back);
  EXPECT_EQ(render(again), first);

  std::size_t records = 0;
  std::istringstream lines(first);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#') ++records;
  EXPECT_EQ(records, 12u);
  EXPECT_NE(first.find("# tdt sweep " + std::string(kVersion)), std::string::npos);
}

TEST(Sweep, JsonDatasetRoundTrips) {
  auto cfg = parse(kSmall);
  cfg.format = "json";
  const std::string first = render(cfg);
  const auto doc = nlohmann::json::parse(first);
  EXPECT_EQ(doc["records"].size(), 12u);
  EXPECT_EQ(doc["records"][0].size(), doc["meta"]["columns"].size());
  std::istringstream back(first);
  EXPECT_EQ(render(sw::parse_config(back)), first);
}

TEST(Sweep, IndependentOfWorkerCount) {
  const auto cfg = parse(kSmall);
  EXPECT_EQ(render(cfg, 1), render(cfg, 3));
}

TEST(Sweep, PhaseColumnMatchesSolver) {
  const auto cfg = parse(kSmall);
  const auto cols = sw::columns(cfg);
  const auto phase_col = std::find(cols.begin(), cols.end(), "phase") - cols.begin();
  for (std::size_t i = 0; i < sw::record_count(cfg); ++i) {
    const auto row = sw::evaluate_point(cfg, i);
    ASSERT_EQ(row.size(), cols.size());
    const auto sol = meanfield::minimize_energy(sw::point(cfg, i), cfg.n_starts,
                                                sw::detail::splitmix64(cfg.seed + i));
    EXPECT_EQ(static_cast<int>(row[static_cast<std::size_t>(phase_col)]), static_cast<int>(sol.phase));
  }
}

TEST(Sweep, UnwritablePath) {
  auto cfg = parse(kSmall);
  cfg.output_path = "/nonexistent-dir/out.dat";
  EXPECT_THROW(sw::run_sweep(cfg), Error);
}

}  // namespace
