#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace mw {

// Canonical dwell-time buckets, ordered by lower bound (minutes).
enum class DwellBucket : std::uint8_t {
  kUnder5 = 0,
  k5To20,
  k21To60,
  k61To240,
  kOver240,
};

inline constexpr std::size_t kDwellBucketCount = 5;

inline constexpr std::array<DwellBucket, kDwellBucketCount> kAllDwellBuckets = {
    DwellBucket::kUnder5, DwellBucket::k5To20, DwellBucket::k21To60,
    DwellBucket::k61To240, DwellBucket::kOver240};

[[nodiscard]] std::string_view label(DwellBucket bucket);
[[nodiscard]] std::optional<DwellBucket> parse_dwell_bucket(std::string_view label);
[[nodiscard]] int lower_bound_minutes(DwellBucket bucket);

// Visits lasting longer than 20 minutes.
[[nodiscard]] constexpr bool long_duration(DwellBucket bucket) {
  return bucket == DwellBucket::k21To60 || bucket == DwellBucket::k61To240 ||
         bucket == DwellBucket::kOver240;
}

[[nodiscard]] constexpr std::size_t index(DwellBucket bucket) {
  return static_cast<std::size_t>(bucket);
}

// Visit totals per bucket; indexable by DwellBucket.
struct DwellTotals {
  std::array<std::int64_t, kDwellBucketCount> visits{};

  std::int64_t& operator[](DwellBucket b) { return visits[index(b)]; }
  std::int64_t operator[](DwellBucket b) const { return visits[index(b)]; }

  [[nodiscard]] std::int64_t long_duration_total() const;
  [[nodiscard]] std::int64_t total() const;

  bool operator==(const DwellTotals&) const = default;
};

}  // namespace mw
