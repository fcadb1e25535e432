#include "generators.hpp"

#include <array>
#include <cstdio>
#include <string>

#include "mw/ingest/ingest.hpp"

namespace mw::support {
namespace {

constexpr std::array<const char*, 5> kLabels = {"<5", "5-20", "21-60", "61-240", ">240"};
constexpr std::array<std::int32_t, 5> kCodes = {722511, 722513, 722410, 445110, 611110};

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string cbg_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03d%06d%d", i % 3 == 0 ? "27" : "55", 1 + 2 * (i % 4), 100 + i, 1 + i % 3);
  return buf;
}

}  // namespace

std::vector<FlatWeeklyRecord> random_records(std::mt19937_64& rng, const RecordShape& shape) {
  std::vector<FlatWeeklyRecord> out;
  const Date first = Date::from_ymd(2020, 3, 2) + static_cast<std::int32_t>(7 * uniform(rng, 0, 20));
  for (int p = 0; p < shape.n_pois; ++p) {
    FlatWeeklyRecord base;
    base.place_id = "sg:" + std::to_string(uniform(rng, 0, 1'000'000)) + "-" + std::to_string(p);
    base.location_name = shape.awkward_text ? "Caf\xc3\xa9 \"" + std::to_string(p) + "\", Main St" : "Place " + std::to_string(p);
    if (uniform(rng, 0, 2) == 0) base.brand = shape.awkward_text ? "Brand, \"X\"" : "Brand " + std::to_string(p % 3);
    base.naics = NaicsCode{kCodes[static_cast<std::size_t>(uniform(rng, 0, 4))]};
    base.poi_cbg = cbg_id(static_cast<int>(uniform(rng, 0, shape.n_cbgs - 1)));
    if (uniform(rng, 0, 4) != 0) {
      base.latitude = std::uniform_real_distribution<double>(43.5, 49.0)(rng);
      base.longitude = std::uniform_real_distribution<double>(-97.0, -89.5)(rng);
    }
    // Random gaps in each weekly series.
    for (int w = 0; w < shape.n_weeks; ++w) {
      if (uniform(rng, 0, 5) == 0) continue;
      FlatWeeklyRecord r = base;
      r.period_start = first + 7 * w;
      r.period_end = r.period_start + 7;
      for (const char* label : kLabels) r.bucketed_dwell_times[label] = uniform(rng, 0, shape.max_bucket_visits);
      for (const auto& [label, v] : r.bucketed_dwell_times) r.raw_visit_counts += v;
      std::int64_t left = r.raw_visit_counts;
      for (int d = 0; d < 6; ++d) {
        r.visits_by_day[static_cast<std::size_t>(d)] = uniform(rng, 0, left);
        left -= r.visits_by_day[static_cast<std::size_t>(d)];
      }
      r.visits_by_day[6] = left;
      r.raw_visitor_counts = uniform(rng, 0, r.raw_visit_counts);
      std::int64_t visitors = r.raw_visitor_counts;
      for (int o = 0; o < 3 && visitors > 0; ++o) {
        const auto n = o == 2 ? visitors : uniform(rng, 0, visitors);
        if (n > 0) r.visitor_home_cbgs[cbg_id(static_cast<int>(uniform(rng, 0, shape.n_cbgs - 1)))] += n;
        visitors -= n;
      }
      r.median_dwell_minutes = static_cast<double>(uniform(rng, 0, 6000)) / 4.0;
      if (uniform(rng, 0, 3) != 0) r.distance_from_home_meters = std::uniform_real_distribution<double>(0, 50000)(rng);
      out.push_back(std::move(r));
    }
  }
  return out;
}

Warehouse random_warehouse(std::mt19937_64& rng) {
  RecordShape shape;
  shape.n_pois = static_cast<int>(uniform(rng, 0, 12));
  shape.n_weeks = static_cast<int>(uniform(rng, 1, 8));
  shape.n_cbgs = static_cast<int>(uniform(rng, 1, 6));
  shape.awkward_text = uniform(rng, 0, 1) == 1;
  return ingest::load_warehouse(random_records(rng, shape));
}

std::vector<SocialDistancingRecord> random_sd_records(std::mt19937_64& rng, int n_cbgs, int n_days,
                                                      std::int64_t max_devices) {
  std::vector<SocialDistancingRecord> out;
  const Date first = Date::from_ymd(2020, 3, 2);
  for (int c = 0; c < n_cbgs; ++c) {
    for (int d = 0; d < n_days; ++d) {
      SocialDistancingRecord r;
      r.origin_cbg = cbg_id(c);
      r.date = first + d;
      r.device_count = uniform(rng, 0, max_devices);
      r.median_distance_traveled_from_home_meters = static_cast<double>(uniform(rng, 0, 20000));
      r.median_home_dwell_time_minutes = static_cast<double>(uniform(rng, 0, 1440));
      r.completely_home_device_count = uniform(rng, 0, r.device_count);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace mw::support
