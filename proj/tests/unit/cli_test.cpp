#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "grasp_cli/cli.hpp"
#include "grasp_cli/svg.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using grasp::testing::data_path;
using grasp::testing::read_file;
using grasp::testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result grasp_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = grasp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Cli, RunWritesOneRowPerHour) {
  TempDir dir;
  const auto out = (dir / "m.csv").string();
  const auto r = grasp_cli({"run", "--topology", data_path("geni.topo"), "--config", data_path("grasp.json"),
                            "--energy-dir", data_path("sites"), "--hours", "24", "--out", out});
  ASSERT_EQ(r.code, grasp::cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("r_avg=", 0), 0u);
  const auto csv = read_file(out);
  EXPECT_EQ(count_lines(csv), 25u);
  EXPECT_EQ(csv.rfind("hour,scheduler,k,jobs,n_g,r,dc_0,", 0), 0u);
}

TEST(Cli, RunRejectsZeroK) {
  TempDir dir;
  const auto out = dir / "m.csv";
  const auto r = grasp_cli({"run", "--energy-dir", data_path("sites"), "--k", "0", "--out", out.string()});
  EXPECT_EQ(r.code, grasp::cli::kExitInvalid);
  EXPECT_NE(r.err.find("--k"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Cli, RunRejectsUnknownSchedulerAndMissingDir) {
  TempDir dir;
  const auto out = (dir / "m.csv").string();
  EXPECT_EQ(grasp_cli({"run", "--energy-dir", data_path("sites"), "--scheduler", "fair", "--out", out}).code,
            grasp::cli::kExitInvalid);
  EXPECT_EQ(grasp_cli({"run", "--energy-dir", "/nonexistent", "--out", out}).code, grasp::cli::kExitInvalid);
  EXPECT_EQ(grasp_cli({"run", "--out", out}).code, grasp::cli::kExitInvalid);
  EXPECT_EQ(grasp_cli({}).code, grasp::cli::kExitInvalid);
}

TEST(Cli, KSweepCsvAndChart) {
  TempDir dir;
  const auto out = (dir / "k.csv").string();
  const auto svg = (dir / "k.svg").string();
  const auto r = grasp_cli({"sweep", "--mode", "k", "--range", "1:200:10", "--config", data_path("grasp.json"),
                            "--energy-dir", data_path("sites"), "--hours", "48", "--jobs", "2",
                            "--out", out, "--svg", svg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "rows=20\n");
  const auto csv = read_file(out);
  EXPECT_EQ(count_lines(csv), 21u);
  EXPECT_EQ(csv.rfind("k,r_avg_green,r_avg_rr\n1,", 0), 0u);
  const auto chart = read_file(svg);
  EXPECT_EQ(chart.rfind("<svg", 0), 0u);
  EXPECT_EQ(count_of(chart, "<polyline"), 2u);
}

TEST(Cli, LoadSweepRows) {
  TempDir dir;
  const auto out = (dir / "l.csv").string();
  const auto r = grasp_cli({"sweep", "--mode", "load", "--range", "100:900:100", "--energy-dir",
                            data_path("sites"), "--hours", "24", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(read_file(out)), 10u);
  EXPECT_EQ(read_file(out).rfind("load,", 0), 0u);
}

TEST(Cli, SweepRejectsBackwardsRange) {
  TempDir dir;
  const auto out = dir / "l.csv";
  for (const char* range : {"5:1:1", "1:5:0", "1:5", "a:b:c"}) {
    const auto r = grasp_cli({"sweep", "--mode", "k", "--range", range, "--energy-dir", data_path("sites"),
                              "--out", out.string()});
    EXPECT_EQ(r.code, grasp::cli::kExitInvalid) << range;
    EXPECT_NE(r.err.find("--range"), std::string::npos) << r.err;
  }
  EXPECT_EQ(grasp_cli({"sweep", "--mode", "x", "--range", "1:2:1", "--energy-dir", data_path("sites"),
                       "--out", out.string()})
                .code,
            grasp::cli::kExitInvalid);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Cli, GenEnergyZeroShape) {
  TempDir dir;
  const auto out = (dir / "z.csv").string();
  const auto r = grasp_cli({"gen-energy", "--shape", "zero", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = read_file(out);
  EXPECT_EQ(count_lines(text), 8761u);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "wh");
  std::size_t zeros = 0;
  while (std::getline(in, line)) zeros += line == "0";
  EXPECT_EQ(zeros, 8760u);
}

TEST(Cli, GenEnergyFromWeatherMatchesGolden) {
  TempDir dir;
  const auto out = (dir / "g.csv").string();
  const auto r = grasp_cli({"gen-energy", "--from-nsrdb", data_path("sites/01_elmira_corning_regional.csv"),
                            "--config", data_path("grasp.json"), "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(out), read_file(data_path("golden/01_elmira_corning_regional.wh.csv")));
}

TEST(Cli, GenEnergySeedControlsJitter) {
  TempDir dir;
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), c = (dir / "c.csv").string();
  ASSERT_EQ(grasp_cli({"--seed", "5", "gen-energy", "--jitter", "0.4", "--out", a}).code, 0);
  ASSERT_EQ(grasp_cli({"--seed", "5", "gen-energy", "--jitter", "0.4", "--out", b}).code, 0);
  ASSERT_EQ(grasp_cli({"--seed", "6", "gen-energy", "--jitter", "0.4", "--out", c}).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_NE(read_file(a), read_file(c));
}

TEST(Cli, ValidateBundledInputs) {
  const auto r = grasp_cli({"validate", "--topology", data_path("geni.topo"), "--config", data_path("grasp.json"),
                            "--energy", data_path("sites"), "--scenario", data_path("scenarios/geni_1h.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "OK\n");
}

TEST(Cli, ValidateReportsProblem) {
  TempDir dir;
  const auto bad = dir.write("c.json", R"({"job_energy_k": -1})");
  const auto r = grasp_cli({"validate", "--config", bad.string()});
  EXPECT_EQ(r.code, grasp::cli::kExitInvalid);
  EXPECT_NE(r.out.find("job_energy_k"), std::string::npos) << r.out;
}

TEST(Cli, ScenarioSummaryAndTrace) {
  TempDir dir;
  const auto trace = (dir / "t.log").string();
  const auto snaps = (dir / "s.txt").string();
  const auto r = grasp_cli({"scenario", "--scenario", data_path("scenarios/geni_1h.json"), "--trace-out", trace,
                            "--snapshots-out", snaps});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("packet_ins=34 registrations=9 discovery_receipts=6 reports=9 client_requests=10\n", 0),
            0u)
      << r.out;
  EXPECT_NE(r.out.find("flows=10 delivered=10"), std::string::npos);
  EXPECT_GT(count_lines(read_file(trace)), 34u);
  EXPECT_FALSE(read_file(snaps).empty());
}

TEST(Cli, HelpExitsZero) {
  const auto r = grasp_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, BadSeedEnvironmentIsInvalid) {
  TempDir dir;
  ::setenv("GRASP_SEED", "twelve", 1);
  const auto r = grasp_cli({"gen-energy", "--out", (dir / "x.csv").string()});
  ::unsetenv("GRASP_SEED");
  EXPECT_EQ(r.code, grasp::cli::kExitInvalid);
  EXPECT_NE(r.err.find("GRASP_SEED"), std::string::npos);
}

TEST(Svg, PolylinePerSeries) {
  grasp::cli::LineChart chart{"t", "x", "y", {1, 2, 3}, {{"a", "#000", {0, 1, 0.5}}}};
  const auto text = grasp::cli::render_svg(chart);
  EXPECT_EQ(count_of(text, "<polyline"), 1u);
  EXPECT_NE(text.find(">a<"), std::string::npos);
}
