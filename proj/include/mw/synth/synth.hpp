#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mw/analytics/analytics.hpp"
#include "mw/core/calendar.hpp"
#include "mw/core/date.hpp"
#include "mw/core/geo.hpp"
#include "mw/core/population.hpp"
#include "mw/core/records.hpp"

// Seeded generator of vendor-shaped input files with known ground truth.
// All values in the output path come from integer arithmetic on a
// mt19937_64 stream.
namespace mw::synth {

struct CategoryConfig {
  NaicsCode naics;
  std::int32_t n_pois = 0;
  std::int64_t base_weekly_visits = 0;
  // Probabilities over the five dwell buckets in canonical order.
  std::array<double, 5> dwell_mix{};
};

// Visit multipliers applied to weeks whose start falls in range. Categories
// not listed keep multiplier 1. The first matching phase wins.
struct Phase {
  std::string name;
  DateRange range;
  std::map<NaicsCode, double> multipliers;
};

struct HomeDwellPeriod {
  DateRange range;
  std::int32_t minutes = 0;
};

struct HomeDwellProfile {
  std::int32_t baseline_minutes = 600;
  std::int32_t daily_noise_minutes = 30;  // uniform in [-noise, +noise]
  std::vector<HomeDwellPeriod> periods;
};

struct PopulationConfig {
  RegionLevel level = RegionLevel::kState;
  double target_rate = 0.05;
  std::map<std::string, double> target_rates;       // per region override
  std::map<std::string, std::int64_t> counts;       // explicit populations
};

// From recovery_start on, outbreak POIs use recovery_multiplier and the
// remaining POIs of the same category use control_recovery_multiplier.
struct OutbreakConfig {
  NaicsCode naics;
  std::int32_t count = 0;
  double recovery_multiplier = 1.0;
  double control_recovery_multiplier = 1.0;
  Date recovery_start;
  std::string month_linked;  // YYYY-MM
};

struct SynthConfig {
  std::uint64_t seed = 0;
  std::string state = "27";
  std::int32_t n_cbgs = 1;
  std::int32_t n_counties = 1;
  // Week starts run from weeks.start every 7 days while the week ends by weeks.end.
  DateRange weeks;
  std::vector<CategoryConfig> categories;
  std::vector<Phase> phases;
  HomeDwellProfile home_dwell;
  std::int64_t devices_per_cbg = 100;
  std::optional<std::int64_t> devices_total;  // spread over CBGs, replaces devices_per_cbg
  PopulationConfig population;
  std::optional<OutbreakConfig> outbreak;
  std::vector<CalendarEntry> calendar;  // empty means the Minnesota calendar

  // Throws ConfigError on an invalid probability vector, a negative
  // multiplier or count, or an inconsistent layout.
  void validate() const;
};

// Minnesota intervention phases with per-category multipliers for the five
// default categories.
std::vector<Phase> default_phases();
HomeDwellProfile default_home_dwell();

// "desk" or "mn-scale"; anything else is an ArgumentError.
SynthConfig preset(const std::string& name);

// JSON mirror of SynthConfig. Parsing throws ConfigError.
SynthConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const SynthConfig& config);
SynthConfig load_config(const std::filesystem::path& path);

struct SynthData {
  std::vector<FlatWeeklyRecord> weekly;
  std::vector<SocialDistancingRecord> social_distancing;
  PopulationTable population;
  PolicyCalendar calendar;
  std::vector<analytics::RosterEntry> roster;
};

SynthData generate_data(const SynthConfig& config);

struct ManifestEntry {
  std::string file;
  std::size_t rows = 0;
};

inline constexpr std::array<const char*, 5> kSynthFiles = {
    "weekly_patterns.csv", "social_distancing.csv", "population.csv", "calendar.csv",
    "outbreak_roster.csv"};

// Writes the five files into dir (created if needed). Throws PersistenceError
// when the directory is not writable.
std::vector<ManifestEntry> generate(const SynthConfig& config, const std::filesystem::path& dir);

// Multiplier of a category in the week starting at week_start, before any
// outbreak adjustment.
double phase_multiplier(const SynthConfig& config, NaicsCode naics, Date week_start);

}  // namespace mw::synth
