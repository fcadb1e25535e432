#include "mw/core/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mw/core/error.hpp"

namespace mw {

std::size_t region_id_length(RegionLevel level) {
  switch (level) {
    case RegionLevel::kCbg:
      return 12;
    case RegionLevel::kTract:
      return 11;
    case RegionLevel::kCounty:
      return 5;
    case RegionLevel::kState:
      return 2;
  }
  return 0;
}

std::optional<RegionLevel> level_for_id_length(std::size_t length) {
  switch (length) {
    case 12:
      return RegionLevel::kCbg;
    case 11:
      return RegionLevel::kTract;
    case 5:
      return RegionLevel::kCounty;
    case 2:
      return RegionLevel::kState;
    default:
      return std::nullopt;
  }
}

std::optional<RegionLevel> parse_region_level(std::string_view text) {
  if (text == "cbg") return RegionLevel::kCbg;
  if (text == "tract") return RegionLevel::kTract;
  if (text == "county") return RegionLevel::kCounty;
  if (text == "state") return RegionLevel::kState;
  return std::nullopt;
}

std::string_view to_string(RegionLevel level) {
  switch (level) {
    case RegionLevel::kCbg:
      return "cbg";
    case RegionLevel::kTract:
      return "tract";
    case RegionLevel::kCounty:
      return "county";
    case RegionLevel::kState:
      return "state";
  }
  return "";
}

bool finer_or_equal(RegionLevel a, RegionLevel b) {
  return region_id_length(a) >= region_id_length(b);
}

bool is_digits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool is_cbg_id(std::string_view id) { return id.size() == 12 && is_digits(id); }

std::string roll_up(std::string_view region_id, RegionLevel level) {
  const std::size_t n = region_id_length(level);
  if (region_id.size() < n) {
    throw ArgumentError("region id '" + std::string(region_id) + "' is coarser than " +
                        std::string(to_string(level)));
  }
  return std::string(region_id.substr(0, n));
}

double haversine_meters(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadius = 6371008.8;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kRad;
  const double dlon = (lon2 - lon1) * kRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace mw
