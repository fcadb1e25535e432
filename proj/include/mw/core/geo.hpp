#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mw {

// Census geography levels. Ids are FIPS prefixes of the 12-digit CBG id:
// state 2, county 5, tract 11, block group 12.
enum class RegionLevel { kCbg, kTract, kCounty, kState };

[[nodiscard]] std::size_t region_id_length(RegionLevel level);
[[nodiscard]] std::optional<RegionLevel> level_for_id_length(std::size_t length);
[[nodiscard]] std::optional<RegionLevel> parse_region_level(std::string_view text);
[[nodiscard]] std::string_view to_string(RegionLevel level);

// Finer levels have longer ids; kCbg is the finest.
[[nodiscard]] bool finer_or_equal(RegionLevel a, RegionLevel b);

[[nodiscard]] bool is_digits(std::string_view text);
[[nodiscard]] bool is_cbg_id(std::string_view id);

// Truncates a region id to a coarser level. The id must be at least as fine.
[[nodiscard]] std::string roll_up(std::string_view region_id, RegionLevel level);

inline std::string state_of(std::string_view cbg) { return roll_up(cbg, RegionLevel::kState); }
inline std::string county_of(std::string_view cbg) { return roll_up(cbg, RegionLevel::kCounty); }
inline std::string tract_of(std::string_view cbg) { return roll_up(cbg, RegionLevel::kTract); }

// Great-circle distance on a sphere of mean Earth radius.
[[nodiscard]] double haversine_meters(double lat1, double lon1, double lat2, double lon2);

}  // namespace mw
