#pragma once

// Hourly solar data ingestion and conversion to per-site green energy.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grasp::energy {

inline constexpr std::size_t kHoursPerYear = 8760;

/// One hour of weather from an NSRDB-style file.
struct SolarRecord {
  std::size_t hour_index = 0;
  double dry_bulb_c = 0.0;
  double ghi_whm2 = 0.0;
};

/// Column names to pick out of an NSRDB CSV header.
struct NsrdbColumns {
  std::string temp_column = "Dry-bulb (C)";
  std::string ghi_column = "GHI (W/m^2)";
  /// Lines before the header row (NSRDB downloads carry a station metadata line).
  std::size_t skip_lines = 0;

  friend bool operator==(const NsrdbColumns&, const NsrdbColumns&) = default;
};

/// Flat-plate PV array with linear temperature derating.
struct PvPanelModel {
  double area_m2 = 1.0;
  double efficiency = 0.2;
  double temp_coeff_per_c = 0.005;
  double reference_temp_c = 25.0;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const PvPanelModel&, const PvPanelModel&) = default;
};

/// Cell temperature rise per Wh/m^2 of irradiance.
inline constexpr double kCellHeatingPerGhi = 0.03;

/// Green energy (Wh) produced during the hour described by `rec`; never negative.
double pv_output(const SolarRecord& rec, const PvPanelModel& panel);

/// A year of hourly green energy for one site: exactly 8760 finite, non-negative values.
class EnergyProfile {
 public:
  /// Throws WrongRowCount on bad length, ValidationError on a negative or non-finite entry.
  EnergyProfile(std::string site_name, std::vector<double> hourly_wh);

  const std::string& site_name() const noexcept { return site_name_; }
  std::span<const double> hourly_wh() const noexcept { return hourly_wh_; }
  double at(std::size_t hour) const { return hourly_wh_.at(hour); }
  double operator[](std::size_t hour) const noexcept { return hourly_wh_[hour]; }
  std::size_t size() const noexcept { return hourly_wh_.size(); }

  friend bool operator==(const EnergyProfile&, const EnergyProfile&) = default;

 private:
  std::string site_name_;
  std::vector<double> hourly_wh_;
};

std::vector<SolarRecord> parse_nsrdb_csv(std::istream& in, const NsrdbColumns& columns = {});
std::vector<SolarRecord> parse_nsrdb_csv(const std::filesystem::path& path,
                                         const NsrdbColumns& columns = {});

EnergyProfile build_profile(std::string site_name, std::span<const SolarRecord> records,
                            const PvPanelModel& panel = {});

enum class SynthShape { Sinusoid, Constant, Zero };

std::string_view to_string(SynthShape shape);
/// Accepts `sinusoid`, `constant` and `zero`.
std::optional<SynthShape> parse_synth_shape(std::string_view text);

/// Deterministic synthetic profile. Sinusoid is a half-rectified daily sine that is zero
/// from 18:00 to 06:00 and peaks at `peak_wh` at 12:00. With `jitter` in (0,1] each day's
/// amplitude is scaled by a factor drawn uniformly from [1 - jitter, 1] using `seed`.
EnergyProfile synth_profile(std::uint64_t seed, SynthShape shape, double peak_wh,
                            double jitter = 0.0);

/// Direct profile CSV: header `wh` then 8760 values.
EnergyProfile read_profile_csv(std::istream& in, std::string site_name);
EnergyProfile read_profile_csv(const std::filesystem::path& path);
void write_profile_csv(std::ostream& out, const EnergyProfile& profile);

/// Loads either a direct profile CSV or an NSRDB CSV, sniffing the header.
EnergyProfile load_profile(const std::filesystem::path& path, const NsrdbColumns& columns = {},
                           const PvPanelModel& panel = {});

/// Every *.csv in `dir`, in filename order.
std::vector<EnergyProfile> load_profile_dir(const std::filesystem::path& dir,
                                            const NsrdbColumns& columns = {},
                                            const PvPanelModel& panel = {});

}  // namespace grasp::energy
