#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mw/core/records.hpp"
#include "mw/core/warehouse.hpp"

// Seeded random inputs for property tests.
namespace mw::support {

struct RecordShape {
  int n_pois = 8;
  int n_weeks = 6;
  int n_cbgs = 5;
  std::int64_t max_bucket_visits = 50;
  bool awkward_text = false;  // names with commas, quotes and non-ASCII text
};

// Valid records: each (poi, week) appears once, buckets sum to visits and
// daily counts sum to visits.
std::vector<FlatWeeklyRecord> random_records(std::mt19937_64& rng, const RecordShape& shape);

Warehouse random_warehouse(std::mt19937_64& rng);

std::vector<SocialDistancingRecord> random_sd_records(std::mt19937_64& rng, int n_cbgs, int n_days,
                                                      std::int64_t max_devices);

}  // namespace mw::support
