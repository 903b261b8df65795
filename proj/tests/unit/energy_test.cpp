#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "grasp/config.hpp"
#include "grasp/csv.hpp"
#include "grasp/energy.hpp"
#include "grasp/error.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace grasp;
using namespace grasp::energy;
using grasp::testing::data_path;
using grasp::testing::naive_pv;
using grasp::testing::TempDir;

namespace {

std::string nsrdb_text(std::size_t rows, double ghi, double temp = 20.0) {
  std::ostringstream s;
  s << "Date (MM/DD/YYYY),Time (HH:MM),GHI (W/m^2),Dry-bulb (C)\n";
  for (std::size_t i = 0; i < rows; ++i) s << "01/01/2001,01:00," << ghi << ',' << temp << '\n';
  return s.str();
}

}  // namespace

TEST(Nsrdb, AllZeroGhiFile) {
  std::istringstream in(nsrdb_text(kHoursPerYear, 0.0));
  const auto recs = parse_nsrdb_csv(in);
  ASSERT_EQ(recs.size(), kHoursPerYear);
  for (std::size_t h = 0; h < recs.size(); ++h) {
    EXPECT_EQ(recs[h].ghi_whm2, 0.0);
    EXPECT_EQ(recs[h].hour_index, h);
  }
  const auto profile = build_profile("night", recs);
  EXPECT_TRUE(std::all_of(profile.hourly_wh().begin(), profile.hourly_wh().end(),
                          [](double v) { return v == 0.0; }));
}

TEST(Nsrdb, ShortFileReportsRowCount) {
  std::istringstream in(nsrdb_text(8759, 1.0));
  try {
    parse_nsrdb_csv(in);
    FAIL() << "expected WrongRowCount";
  } catch (const WrongRowCount& e) {
    EXPECT_EQ(e.got(), 8759u);
  }
}

TEST(Nsrdb, NegativeGhiReportsLine) {
  auto text = nsrdb_text(kHoursPerYear, 1.0);
  // Line 1 is the header; make data line 3 negative.
  std::istringstream lines(text);
  std::ostringstream edited;
  std::string line;
  for (int n = 1; std::getline(lines, line); ++n) {
    edited << (n == 3 ? "01/01/2001,03:00,-5,20" : line) << '\n';
  }
  std::istringstream in(edited.str());
  try {
    parse_nsrdb_csv(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Nsrdb, MissingColumnNamed) {
  std::istringstream in("Date,Time,GHI (W/m^2)\n01/01/2001,01:00,3\n");
  try {
    parse_nsrdb_csv(in);
    FAIL() << "expected MissingColumn";
  } catch (const MissingColumn& e) {
    EXPECT_EQ(e.column(), "Dry-bulb (C)");
  }
}

TEST(Nsrdb, ConfigurableColumnsAndSkippedPreamble) {
  std::ostringstream s;
  s << "Source,Location ID\nNSRDB,123\n";
  s << "Year,Temperature,GHI\n";
  for (std::size_t i = 0; i < kHoursPerYear; ++i) s << "2001," << (i % 7) << ',' << (i % 3) * 10 << '\n';
  std::istringstream in(s.str());
  NsrdbColumns cols{"Temperature", "GHI", 2};
  const auto recs = parse_nsrdb_csv(in, cols);
  ASSERT_EQ(recs.size(), kHoursPerYear);
  EXPECT_EQ(recs[4].dry_bulb_c, 4.0);
  EXPECT_EQ(recs[4].ghi_whm2, 10.0);
}

TEST(PvOutput, ZeroIrradiance) {
  PvPanelModel panel;
  for (double t : {-30.0, 0.0, 45.0}) EXPECT_EQ(pv_output({0, t, 0.0}, panel), 0.0);
}

TEST(PvOutput, ReferenceConditionMatchesHandValue) {
  // cell = -5 + 0.03 * 1000 = 25 = reference, so no derating: 1000 * 1 * 0.2.
  EXPECT_DOUBLE_EQ(naive_pv(1000, -5, 1, 0.2, 0.005, 25), 200.0);
  EXPECT_DOUBLE_EQ(pv_output({0, -5.0, 1000.0}, PvPanelModel{}), 200.0);
}

TEST(PvOutput, ExtremeDeratingClampsToZero) {
  PvPanelModel panel;
  panel.temp_coeff_per_c = 0.5;
  EXPECT_EQ(pv_output({0, 40.0, 800.0}, panel), 0.0);
}

TEST(PvOutput, MatchesIndependentFormulaAndIsMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ghi(0, 1100), temp(-20, 45);
  PvPanelModel panel{3.0, 0.18, 0.004, 25.0};
  for (int i = 0; i < 2000; ++i) {
    const double g = ghi(rng), t = temp(rng);
    const double got = pv_output({0, t, g}, panel);
    EXPECT_DOUBLE_EQ(got, naive_pv(g, t, 3.0, 0.18, 0.004, 25.0));
    EXPECT_GE(got, 0.0);
    // Non-decreasing in GHI while the derating stays non-negative.
    if (1.0 - 0.004 * (t + 0.03 * (g + 1.0) - 25.0) > 0.0) {
      EXPECT_LE(got, pv_output({0, t, g + 1.0}, panel));
    }
  }
}

TEST(Profile, RejectsWrongLengthOrNegative) {
  EXPECT_THROW(EnergyProfile("x", std::vector<double>(10, 0.0)), WrongRowCount);
  std::vector<double> v(kHoursPerYear, 1.0);
  v[5] = -1;
  EXPECT_THROW(EnergyProfile("x", v), ValidationError);
}

TEST(Profile, BundledSiteMatchesGolden) {
  const auto cfg = load_config(data_path("grasp.json"));
  const auto site = data_path("sites/01_elmira_corning_regional.csv");
  const auto records = parse_nsrdb_csv(std::filesystem::path(site), cfg.nsrdb);
  const auto profile = build_profile("01_elmira_corning_regional", records, cfg.panel);
  std::ostringstream out;
  write_profile_csv(out, profile);
  EXPECT_EQ(out.str(), grasp::testing::read_file(data_path("golden/01_elmira_corning_regional.wh.csv")));

  // Spot-check against the raw columns with the independent formula.
  std::ifstream raw(site);
  std::string line;
  std::getline(raw, line);
  for (std::size_t h = 0; std::getline(raw, line); ++h) {
    const auto f = csv::split_record(line);
    const double expect = naive_pv(std::stod(f[2]), std::stod(f[3]), cfg.panel.area_m2,
                                   cfg.panel.efficiency, cfg.panel.temp_coeff_per_c,
                                   cfg.panel.reference_temp_c);
    ASSERT_DOUBLE_EQ(profile[h], expect) << "hour " << h;
  }
}

TEST(Profile, NineBundledSitesInTableOrder) {
  const auto cfg = load_config(data_path("grasp.json"));
  const auto profiles = load_profile_dir(data_path("sites"), cfg.nsrdb, cfg.panel);
  ASSERT_EQ(profiles.size(), 9u);
  const char* names[] = {"01_elmira_corning_regional", "02_watertown", "03_westhampton_gabreski",
                         "04_homestead", "05_orlando", "06_tyndall",
                         "07_lompoc", "08_march", "09_travis_field"};
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(profiles[i].site_name(), names[i]);
    EXPECT_EQ(profiles[i].size(), kHoursPerYear);
    EXPECT_GT(*std::max_element(profiles[i].hourly_wh().begin(), profiles[i].hourly_wh().end()), 0.0);
  }
}

TEST(Profile, DirectCsvRoundTripAndSniffing) {
  const auto p = synth_profile(3, SynthShape::Sinusoid, 123.456, 0.3);
  TempDir dir;
  const auto file = dir / "s.csv";
  {
    std::ofstream out(file);
    write_profile_csv(out, p);
  }
  const auto back = load_profile(file);
  EXPECT_EQ(back.hourly_wh().size(), kHoursPerYear);
  EXPECT_TRUE(std::equal(back.hourly_wh().begin(), back.hourly_wh().end(), p.hourly_wh().begin()));
  EXPECT_EQ(back.site_name(), "s");

  std::istringstream bad("wh\n1\n-2\n");
  EXPECT_THROW(read_profile_csv(bad, "x"), ParseError);
  std::istringstream wrong_header("energy\n1\n");
  EXPECT_THROW(read_profile_csv(wrong_header, "x"), MissingColumn);
}

TEST(Synth, ZeroAndConstant) {
  const auto z = synth_profile(1, SynthShape::Zero, 50);
  EXPECT_TRUE(std::all_of(z.hourly_wh().begin(), z.hourly_wh().end(), [](double v) { return v == 0; }));
  const auto c = synth_profile(1, SynthShape::Constant, 10);
  EXPECT_TRUE(std::all_of(c.hourly_wh().begin(), c.hourly_wh().end(), [](double v) { return v == 10; }));
}

TEST(Synth, SinusoidPeaksAtNoon) {
  const auto s = synth_profile(9, SynthShape::Sinusoid, 100);
  EXPECT_EQ(s[0], 0.0);
  for (std::size_t day = 0; day < 365; day += 73) {
    const std::size_t base = day * 24;
    EXPECT_DOUBLE_EQ(s[base + 12], 100.0);  // sin(pi/2)
    EXPECT_EQ(s[base + 6], 0.0);
    EXPECT_EQ(s[base + 18], 0.0);
    EXPECT_EQ(s[base + 3], 0.0);
    EXPECT_NEAR(s[base + 9], 100.0 * std::sin(std::acos(-1.0) / 4), 1e-12);
    EXPECT_EQ(s[base + 8], s[base + 16]);
  }
  EXPECT_EQ(*std::max_element(s.hourly_wh().begin(), s.hourly_wh().end()), 100.0);
}

TEST(Synth, SeedOnlyMattersWithJitter) {
  EXPECT_EQ(synth_profile(1, SynthShape::Sinusoid, 80).hourly_wh()[12],
            synth_profile(2, SynthShape::Sinusoid, 80).hourly_wh()[12]);
  const auto a = synth_profile(1, SynthShape::Sinusoid, 80, 0.5);
  const auto b = synth_profile(1, SynthShape::Sinusoid, 80, 0.5);
  const auto c = synth_profile(2, SynthShape::Sinusoid, 80, 0.5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.hourly_wh()[12], c.hourly_wh()[12]);
  for (std::size_t day = 0; day < 365; ++day) {
    EXPECT_LE(a[day * 24 + 12], 80.0);
    EXPECT_GE(a[day * 24 + 12], 40.0);
  }
  EXPECT_THROW(synth_profile(1, SynthShape::Constant, -1), ValidationError);
  EXPECT_THROW(synth_profile(1, SynthShape::Sinusoid, 1, 2.0), ValidationError);
}

TEST(Synth, ShapeNames) {
  EXPECT_EQ(parse_synth_shape("zero"), SynthShape::Zero);
  EXPECT_EQ(to_string(SynthShape::Sinusoid), "sinusoid");
  EXPECT_FALSE(parse_synth_shape("square"));
}
