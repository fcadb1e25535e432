#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "mw/core/date.hpp"
#include "mw/core/dwell.hpp"

namespace mw {

// Six-digit NAICS business-category code.
struct NaicsCode {
  std::int32_t value = 0;

  [[nodiscard]] bool valid() const { return value >= 100000 && value <= 999999; }
  [[nodiscard]] std::string str() const { return std::to_string(value); }

  auto operator<=>(const NaicsCode&) const = default;
};

inline constexpr std::int32_t kPeriodDays = 7;

// One row of the vendor's denormalized weekly-pattern table.
struct FlatWeeklyRecord {
  std::string place_id;
  std::string location_name;
  std::optional<std::string> brand;
  NaicsCode naics;
  std::string poi_cbg;
  std::optional<double> latitude;
  std::optional<double> longitude;
  Date period_start;
  Date period_end;
  std::int64_t raw_visit_counts = 0;
  std::int64_t raw_visitor_counts = 0;
  double median_dwell_minutes = 0.0;
  // Keys are bucket labels as they appear in the input; validation rejects
  // non-canonical labels.
  std::map<std::string, std::int64_t> bucketed_dwell_times;
  std::array<std::int64_t, 7> visits_by_day{};
  std::map<std::string, std::int64_t> visitor_home_cbgs;
  std::optional<double> distance_from_home_meters;

  bool operator==(const FlatWeeklyRecord&) const = default;
};

// First-normal-form row: one (place, period, bucket) visit count.
struct DwellRow {
  std::string place_id;
  Date period_start;
  Date period_end;
  NaicsCode naics;
  DwellBucket dwell_bucket = DwellBucket::kUnder5;
  std::int64_t visits = 0;

  bool operator==(const DwellRow&) const = default;
};

// Daily per-CBG social-distancing metrics.
struct SocialDistancingRecord {
  std::string origin_cbg;
  Date date;
  std::int64_t device_count = 0;
  double median_distance_traveled_from_home_meters = 0.0;
  double median_home_dwell_time_minutes = 0.0;
  std::int64_t completely_home_device_count = 0;

  bool operator==(const SocialDistancingRecord&) const = default;
};

}  // namespace mw
