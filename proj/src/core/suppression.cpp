#include "mw/core/suppression.hpp"

#include "mw/core/error.hpp"

namespace mw {

SuppressionResult suppress_low_device_cbgs(std::span<const SocialDistancingRecord> records,
                                           std::int64_t threshold) {
  if (threshold < 0) throw ArgumentError("suppression threshold must be >= 0");
  SuppressionResult result;
  for (const auto& r : records) {
    if (r.device_count < threshold) {
      result.suppressed_cbgs.insert(r.origin_cbg);
      ++result.removed_records;
    } else {
      result.kept.push_back(r);
    }
  }
  return result;
}

}  // namespace mw
