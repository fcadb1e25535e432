#include <algorithm>
#include <map>

#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"
#include "mw/ingest/ingest.hpp"

namespace mw::ingest {
namespace {

constexpr const char* kCountry = "US";

void ensure_cbg(Warehouse& w, const std::string& cbg) {
  const std::string state = state_of(cbg);
  w.add_country(kCountry);
  w.add_state({state, kCountry});
  w.add_cbg({cbg, state});
}

}  // namespace

std::vector<DwellRow> explode_to_1nf(const FlatWeeklyRecord& record) {
  std::vector<DwellRow> rows;
  rows.reserve(record.bucketed_dwell_times.size());
  for (const auto& [key, visits] : record.bucketed_dwell_times) {
    auto bucket = parse_dwell_bucket(key);
    if (!bucket) throw ArgumentError("unknown bucket '" + key + "' in " + record.place_id);
    rows.push_back({record.place_id, record.period_start, record.period_end, record.naics, *bucket,
                    visits});
  }
  std::sort(rows.begin(), rows.end(),
            [](const DwellRow& a, const DwellRow& b) { return a.dwell_bucket < b.dwell_bucket; });
  return rows;
}

Warehouse load_warehouse(std::span<const FlatWeeklyRecord> records, LoadOptions options) {
  Warehouse w;
  std::map<PoiPeriodKey, const FlatWeeklyRecord*> seen;
  for (const auto& r : records) {
    const PoiPeriodKey key{r.place_id, r.period_start};
    auto [it, fresh] = seen.emplace(key, &r);
    if (!fresh) {
      if (options.dedup_identical && *it->second == r) continue;
      throw IngestConflictError("duplicate rows for (" + r.place_id + ", " + r.period_start.iso() +
                                ")");
    }

    ensure_cbg(w, r.poi_cbg);
    w.add_poi({r.place_id, r.location_name, r.naics, r.poi_cbg, r.latitude, r.longitude});
    if (r.brand) {
      w.add_brand(*r.brand);
      w.link_brand(*r.brand, r.place_id);
    }
    w.add_period({r.period_start, r.period_end});
    w.add_visit_fact({r.place_id, r.period_start, r.raw_visit_counts, r.raw_visitor_counts,
                      r.median_dwell_minutes, r.distance_from_home_meters});
    for (const auto& row : explode_to_1nf(r)) {
      w.add_dwell_fact({row.place_id, row.period_start, row.dwell_bucket, row.visits});
    }
    for (int day = 0; day < kPeriodDays; ++day) {
      w.add_interval_fact({r.place_id, r.period_start, day, r.visits_by_day[day]});
    }
    for (const auto& [origin, visitors] : r.visitor_home_cbgs) {
      ensure_cbg(w, origin);
      w.add_origin_fact({r.place_id, r.period_start, origin, visitors});
    }
  }
  return w;
}

}  // namespace mw::ingest
