#include "mw/core/dwell.hpp"

#include <numeric>

namespace mw {
namespace {

constexpr std::array<std::string_view, kDwellBucketCount> kLabels = {"<5", "5-20", "21-60",
                                                                      "61-240", ">240"};
constexpr std::array<int, kDwellBucketCount> kLowerBounds = {0, 5, 21, 61, 241};

}  // namespace

std::string_view label(DwellBucket bucket) { return kLabels[index(bucket)]; }

std::optional<DwellBucket> parse_dwell_bucket(std::string_view text) {
  for (DwellBucket b : kAllDwellBuckets) {
    if (kLabels[index(b)] == text) return b;
  }
  return std::nullopt;
}

int lower_bound_minutes(DwellBucket bucket) { return kLowerBounds[index(bucket)]; }

std::int64_t DwellTotals::long_duration_total() const {
  std::int64_t sum = 0;
  for (DwellBucket b : kAllDwellBuckets) {
    if (long_duration(b)) sum += (*this)[b];
  }
  return sum;
}

std::int64_t DwellTotals::total() const {
  return std::accumulate(visits.begin(), visits.end(), std::int64_t{0});
}

}  // namespace mw
