#include "grasp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

#include "grasp/csv.hpp"
#include "grasp/error.hpp"
#include "grasp/model.hpp"

namespace grasp::energy {

void PvPanelModel::validate() const {
  if (!(area_m2 > 0.0) || !std::isfinite(area_m2)) {
    throw ValidationError("panel.area_m2", "must be > 0");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ValidationError("panel.efficiency", "must lie in (0, 1]");
  }
  if (!(temp_coeff_per_c >= 0.0) || !std::isfinite(temp_coeff_per_c)) {
    throw ValidationError("panel.temp_coeff_per_c", "must be >= 0");
  }
  if (!std::isfinite(reference_temp_c)) {
    throw ValidationError("panel.reference_temp_c", "must be finite");
  }
}

double pv_output(const SolarRecord& rec, const PvPanelModel& panel) {
  const double cell_temp = rec.dry_bulb_c + kCellHeatingPerGhi * rec.ghi_whm2;
  const double derate = 1.0 - panel.temp_coeff_per_c * (cell_temp - panel.reference_temp_c);
  const double wh = rec.ghi_whm2 * panel.area_m2 * panel.efficiency * derate;
  return std::max(0.0, wh);
}

EnergyProfile::EnergyProfile(std::string site_name, std::vector<double> hourly_wh)
    : site_name_(std::move(site_name)), hourly_wh_(std::move(hourly_wh)) {
  if (hourly_wh_.size() != kHoursPerYear) throw WrongRowCount(hourly_wh_.size());
  for (std::size_t h = 0; h < hourly_wh_.size(); ++h) {
    const double v = hourly_wh_[h];
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("hourly_wh", "hour " + std::to_string(h) + " is negative or not finite");
    }
  }
}

namespace {

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::vector<SolarRecord> parse_nsrdb_csv(std::istream& in, const NsrdbColumns& columns) {
  std::string line;
  std::size_t line_no = 0;
  for (std::size_t i = 0; i < columns.skip_lines; ++i) {
    if (!std::getline(in, line)) throw ParseError("file ends before the header row", line_no);
    ++line_no;
  }
  if (!std::getline(in, line)) throw ParseError("missing header row", line_no + 1);
  ++line_no;

  const auto header = csv::split_record(line);
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      auto h = std::string_view(header[i]);
      while (!h.empty() && h.front() == ' ') h.remove_prefix(1);
      while (!h.empty() && h.back() == ' ') h.remove_suffix(1);
      if (h == name) return i;
    }
    throw MissingColumn(name);
  };
  const std::size_t temp_col = column_index(columns.temp_column);
  const std::size_t ghi_col = column_index(columns.ghi_column);
  const std::size_t needed = std::max(temp_col, ghi_col) + 1;

  std::vector<SolarRecord> records;
  records.reserve(kHoursPerYear);
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = csv::split_record(line);
    if (fields.size() < needed) throw ParseError("too few fields", line_no);
    SolarRecord rec;
    rec.hour_index = records.size();
    if (!csv::parse_double(fields[temp_col], rec.dry_bulb_c) || !std::isfinite(rec.dry_bulb_c)) {
      throw ParseError("bad value in '" + columns.temp_column + "'", line_no);
    }
    if (!csv::parse_double(fields[ghi_col], rec.ghi_whm2) || !std::isfinite(rec.ghi_whm2)) {
      throw ParseError("bad value in '" + columns.ghi_column + "'", line_no);
    }
    if (rec.ghi_whm2 < 0.0) throw ParseError("negative irradiance", line_no);
    records.push_back(rec);
  }
  if (records.size() != kHoursPerYear) throw WrongRowCount(records.size());
  return records;
}

std::vector<SolarRecord> parse_nsrdb_csv(const std::filesystem::path& path,
                                         const NsrdbColumns& columns) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_nsrdb_csv(in, columns);
}

EnergyProfile build_profile(std::string site_name, std::span<const SolarRecord> records,
                            const PvPanelModel& panel) {
  panel.validate();
  if (records.size() != kHoursPerYear) throw WrongRowCount(records.size());
  std::vector<double> wh(records.size());
  std::transform(records.begin(), records.end(), wh.begin(),
                 [&](const SolarRecord& r) { return pv_output(r, panel); });
  return EnergyProfile(std::move(site_name), std::move(wh));
}

std::string_view to_string(SynthShape shape) {
  switch (shape) {
    case SynthShape::Sinusoid:
      return "sinusoid";
    case SynthShape::Constant:
      return "constant";
    case SynthShape::Zero:
      return "zero";
  }
  return "?";
}

std::optional<SynthShape> parse_synth_shape(std::string_view text) {
  if (text == "sinusoid") return SynthShape::Sinusoid;
  if (text == "constant") return SynthShape::Constant;
  if (text == "zero") return SynthShape::Zero;
  return std::nullopt;
}

EnergyProfile synth_profile(std::uint64_t seed, SynthShape shape, double peak_wh, double jitter) {
  if (!(peak_wh >= 0.0) || !std::isfinite(peak_wh)) {
    throw ValidationError("peak_wh", "must be finite and >= 0");
  }
  if (!(jitter >= 0.0 && jitter <= 1.0)) throw ValidationError("jitter", "must lie in [0, 1]");

  std::vector<double> wh(kHoursPerYear, 0.0);
  std::string name;
  switch (shape) {
    case SynthShape::Zero:
      name = "synth-" + std::string(to_string(shape));
      break;
    case SynthShape::Constant:
      name = "synth-" + std::string(to_string(shape));
      std::fill(wh.begin(), wh.end(), peak_wh);
      break;
    case SynthShape::Sinusoid: {
      name = "synth-" + std::string(to_string(shape));
      std::mt19937_64 engine(seed);
      for (std::size_t day = 0; day < kHoursPerYear / 24; ++day) {
        // 53 random bits -> [0, 1); drawn every day so the sequence does not depend on jitter.
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        const double amplitude = peak_wh * (1.0 - jitter * u);
        for (std::size_t hod = 7; hod < 18; ++hod) {
          const double phase = std::numbers::pi * (static_cast<double>(hod) - 6.0) / 12.0;
          wh[day * 24 + hod] = amplitude * std::sin(phase);
        }
      }
      break;
    }
  }
  return EnergyProfile(name + "-" + std::to_string(seed), std::move(wh));
}

EnergyProfile read_profile_csv(std::istream& in, std::string site_name) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1);
  const auto header = csv::split_record(line);
  if (header.size() != 1 || header[0] != "wh") throw MissingColumn("wh");
  std::vector<double> wh;
  wh.reserve(kHoursPerYear);
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    double v = 0.0;
    if (!csv::parse_double(csv::split_record(line).at(0), v) || !std::isfinite(v)) {
      throw ParseError("bad energy value", line_no);
    }
    if (v < 0.0) throw ParseError("negative energy value", line_no);
    wh.push_back(v);
  }
  if (wh.size() != kHoursPerYear) throw WrongRowCount(wh.size());
  return EnergyProfile(std::move(site_name), std::move(wh));
}

EnergyProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_profile_csv(in, path.stem().string());
}

void write_profile_csv(std::ostream& out, const EnergyProfile& profile) {
  out << "wh\n";
  for (double v : profile.hourly_wh()) out << format_real(v) << '\n';
}

EnergyProfile load_profile(const std::filesystem::path& path, const NsrdbColumns& columns,
                           const PvPanelModel& panel) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  in.clear();
  in.seekg(0);
  if (first == "wh") return read_profile_csv(in, path.stem().string());
  const auto records = parse_nsrdb_csv(in, columns);
  return build_profile(path.stem().string(), records, panel);
}

std::vector<EnergyProfile> load_profile_dir(const std::filesystem::path& dir,
                                            const NsrdbColumns& columns,
                                            const PvPanelModel& panel) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParseError("no .csv profiles in " + dir.string());
  std::vector<EnergyProfile> profiles;
  profiles.reserve(files.size());
  for (const auto& f : files) profiles.push_back(load_profile(f, columns, panel));
  return profiles;
}

}  // namespace grasp::energy
