#include <fstream>

#include <json.hpp>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"
#include "mw/ingest/ingest.hpp"

namespace mw::ingest {
namespace {

template <std::size_t N>
void write_header(std::ostream& out, const std::array<std::string_view, N>& header) {
  std::vector<std::string> names(header.begin(), header.end());
  csv::write_row(out, names);
}

// Canonical labels first in bucket order, then anything else verbatim.
std::string bucket_json(const std::map<std::string, std::int64_t>& buckets) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (DwellBucket b : kAllDwellBuckets) {
    auto it = buckets.find(std::string(label(b)));
    if (it != buckets.end()) doc[it->first] = it->second;
  }
  for (const auto& [key, n] : buckets) {
    if (!parse_dwell_bucket(key)) doc[key] = n;
  }
  return doc.dump();
}

std::string opt(const std::optional<double>& v) { return v ? csv::format_exact(*v) : ""; }

}  // namespace

void write_flat_weekly(std::ostream& out, std::span<const FlatWeeklyRecord> records) {
  write_header(out, kWeeklyHeader);
  for (const auto& r : records) {
    csv::write_row(out, {r.place_id, r.location_name, r.brand.value_or(""), r.naics.str(), r.poi_cbg,
                         opt(r.latitude), opt(r.longitude), r.period_start.iso(), r.period_end.iso(),
                         std::to_string(r.raw_visit_counts), std::to_string(r.raw_visitor_counts),
                         csv::format_exact(r.median_dwell_minutes), bucket_json(r.bucketed_dwell_times),
                         nlohmann::json(r.visits_by_day).dump(), nlohmann::json(r.visitor_home_cbgs).dump(),
                         opt(r.distance_from_home_meters)});
  }
}

void write_social_distancing(std::ostream& out, std::span<const SocialDistancingRecord> records) {
  write_header(out, kSocialDistancingHeader);
  for (const auto& r : records) {
    csv::write_row(out, {r.origin_cbg, r.date.iso(), std::to_string(r.device_count),
                         csv::format_exact(r.median_distance_traveled_from_home_meters),
                         csv::format_exact(r.median_home_dwell_time_minutes),
                         std::to_string(r.completely_home_device_count)});
  }
}

void save_social_distancing(const std::filesystem::path& path,
                            std::span<const SocialDistancingRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write " + path.string());
  write_social_distancing(out, records);
  out.close();
  if (!out) throw PersistenceError("cannot write " + path.string());
}

}  // namespace mw::ingest
