#include <algorithm>

#include "mw/analytics/analytics.hpp"
#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"

namespace mw::analytics {
namespace {

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double metric_value(const SocialDistancingRecord& r, ComplianceMetric metric) {
  return metric == ComplianceMetric::kTimeAtHome ? r.median_home_dwell_time_minutes
                                                 : r.median_distance_traveled_from_home_meters;
}

std::string series_label(ComplianceMetric metric, Aggregation aggregation) {
  std::string label = metric == ComplianceMetric::kTimeAtHome ? "time_at_home" : "distance_from_home";
  label += aggregation == Aggregation::kMedianOfMedians ? " (median_of_medians)"
                                                        : " (device_weighted_mean)";
  return label;
}

}  // namespace

SamplingRates sampling_rate(std::span<const SocialDistancingRecord> records,
                            const PopulationTable& population, RegionLevel level,
                            const DateRange& as_of) {
  if (population.empty()) throw ArgumentError("population table is empty");
  if (!finer_or_equal(population.level(), level)) {
    throw ArgumentError("population is at " + std::string(to_string(population.level())) +
                        " level, coarser than requested " + std::string(to_string(level)));
  }
  const PopulationTable rolled = population.rolled_up(level);

  std::set<Date> days;
  std::map<std::string, std::int64_t> devices;
  for (const auto& r : records) {
    if (!as_of.contains(r.date)) continue;
    days.insert(r.date);
    devices[roll_up(r.origin_cbg, level)] += r.device_count;
  }

  SamplingRates out;
  out.level = level;
  const auto n_days = static_cast<double>(days.size());
  for (const auto& [region, total] : devices) {
    auto it = rolled.rows().find(region);
    if (it == rolled.rows().end() || it->second == 0) {
      out.omitted.push_back(region);
      continue;
    }
    const double rate = (static_cast<double>(total) / n_days) / static_cast<double>(it->second);
    out.rates[region] = rate;
    if (rate > 1.0) out.flagged.push_back(region);
  }
  return out;
}

WeeklySeries compliance_series(std::span<const SocialDistancingRecord> records,
                               ComplianceMetric metric, Aggregation aggregation,
                               const DateRange& range) {
  if (!range.well_ordered()) throw ArgumentError("start is after end");
  std::map<Date, std::vector<const SocialDistancingRecord*>> weeks;
  for (const auto& r : records) {
    if (!range.contains(r.date)) continue;
    const std::int32_t offset = (r.date - range.start) / kPeriodDays * kPeriodDays;
    weeks[range.start + offset].push_back(&r);
  }

  WeeklySeries series;
  series.label = series_label(metric, aggregation);
  for (const auto& [week, rows] : weeks) {
    if (aggregation == Aggregation::kMedianOfMedians) {
      std::vector<double> values;
      values.reserve(rows.size());
      for (const auto* r : rows) values.push_back(metric_value(*r, metric));
      series.points.push_back({week, median(std::move(values))});
    } else {
      double weighted = 0.0;
      std::int64_t devices = 0;
      for (const auto* r : rows) {
        weighted += static_cast<double>(r->device_count) * metric_value(*r, metric);
        devices += r->device_count;
      }
      if (devices > 0) series.points.push_back({week, weighted / static_cast<double>(devices)});
    }
  }
  return series;
}

}  // namespace mw::analytics
