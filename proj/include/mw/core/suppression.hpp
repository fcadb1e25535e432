#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mw/core/records.hpp"

namespace mw {

inline constexpr std::int64_t kDefaultSuppressionThreshold = 5;

struct SuppressionResult {
  std::vector<SocialDistancingRecord> kept;
  // Distinct CBGs with at least one removed record.
  std::set<std::string> suppressed_cbgs;
  std::size_t removed_records = 0;
};

// Drops every record whose device_count is below threshold. Threshold 0
// keeps everything; a negative threshold is an ArgumentError.
SuppressionResult suppress_low_device_cbgs(std::span<const SocialDistancingRecord> records,
                                           std::int64_t threshold);

}  // namespace mw
