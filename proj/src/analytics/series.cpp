#include <algorithm>
#include <limits>
#include <optional>

#include "mw/analytics/analytics.hpp"
#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"

namespace mw::analytics {
namespace {

// Long-duration visits of one POI per period start.
std::map<Date, std::int64_t> long_visits_by_week(const Warehouse& w, const std::string& place_id) {
  std::map<Date, std::int64_t> out;
  for (const auto& [key, fact] : w.dwell_facts_of(place_id)) {
    if (long_duration(fact.bucket)) out[fact.period_start] += fact.visits;
  }
  return out;
}

std::optional<double> baseline_mean(const Warehouse& w, const std::string& place_id,
                                    const DateRange& window) {
  std::int64_t total = 0;
  std::int64_t weeks = 0;
  for (const auto& [key, fact] : w.visit_facts_of(place_id)) {
    const auto& period = w.periods().at(fact.period_start);
    if (!window.covers(period.start, period.end)) continue;
    total += fact.raw_visits;
    ++weeks;
  }
  if (weeks == 0) return std::nullopt;
  return static_cast<double>(total) / static_cast<double>(weeks);
}

}  // namespace

std::vector<WeeklySeries> weekly_category_series(const Warehouse& w,
                                                 const std::set<NaicsCode>& categories,
                                                 DwellFilter filter, const DateRange& range) {
  if (categories.empty()) throw ArgumentError("at least one category is required");
  if (!range.well_ordered()) throw ArgumentError("start is after end");
  const auto periods = w.periods_within(range);

  std::vector<WeeklySeries> out;
  for (NaicsCode naics : categories) {
    std::map<Date, std::int64_t> weekly;
    for (const auto& place_id : w.pois_with_naics(naics)) {
      if (filter == DwellFilter::kAll) {
        for (const auto& [key, fact] : w.visit_facts_of(place_id)) weekly[fact.period_start] += fact.raw_visits;
      } else {
        for (const auto& [week, visits] : long_visits_by_week(w, place_id)) weekly[week] += visits;
      }
    }
    WeeklySeries series;
    series.label = naics.str();
    for (const auto& period : periods) {
      auto it = weekly.find(period.start);
      series.points.push_back({period.start, static_cast<double>(it == weekly.end() ? 0 : it->second)});
    }
    out.push_back(std::move(series));
  }
  return out;
}

WeeklySeries annotate_with_calendar(WeeklySeries series, const PolicyCalendar& calendar) {
  series.annotations.clear();
  if (!series.points.empty()) {
    series.annotations = calendar.within(series.points.front().week_start,
                                         series.points.back().week_start + (kPeriodDays - 1));
  }
  return series;
}

void MatchParams::validate() const {
  if (!(ratio_low <= 1.0 && 1.0 <= ratio_high)) {
    throw ArgumentError("visit ratio band must contain 1");
  }
  if (!(max_distance_meters > 0)) throw ArgumentError("max distance must be positive");
  if (!baseline_window.well_ordered()) throw ArgumentError("baseline window start is after end");
}

MatchResult match_controls(const Warehouse& w, std::span<const std::string> outbreak_pois,
                           std::span<const std::string> candidate_pois, const MatchParams& params) {
  params.validate();
  std::vector<std::string> outbreak(outbreak_pois.begin(), outbreak_pois.end());
  std::sort(outbreak.begin(), outbreak.end());
  outbreak.erase(std::unique(outbreak.begin(), outbreak.end()), outbreak.end());
  const std::set<std::string> outbreak_set(outbreak.begin(), outbreak.end());

  std::set<std::string> available;
  for (const auto& id : candidate_pois) {
    if (!outbreak_set.contains(id)) available.insert(id);
  }

  MatchResult result;
  for (const auto& id : outbreak) {
    const PoiRow* poi = w.find_poi(id);
    const auto mean = poi ? baseline_mean(w, id, params.baseline_window) : std::nullopt;
    if (!poi || !poi->latitude || !poi->longitude || !mean || *mean <= 0) {
      result.unmatched.push_back(id);
      continue;
    }
    std::optional<MatchedPair> best;
    for (const auto& cid : available) {
      const PoiRow* cand = w.find_poi(cid);
      if (!cand || cand->naics != poi->naics || !cand->latitude || !cand->longitude) continue;
      const double d = haversine_meters(*poi->latitude, *poi->longitude, *cand->latitude, *cand->longitude);
      if (d > params.max_distance_meters) continue;
      const auto cmean = baseline_mean(w, cid, params.baseline_window);
      if (!cmean) continue;
      const double ratio = *cmean / *mean;
      if (ratio < params.ratio_low || ratio > params.ratio_high) continue;
      // Candidates iterate in id order, so strict < keeps the smaller id on ties.
      if (!best || d < best->distance_meters) best = MatchedPair{id, cid, d, ratio};
    }
    if (best) {
      available.erase(best->control_poi);
      result.pairs.push_back(std::move(*best));
    } else {
      result.unmatched.push_back(id);
    }
  }
  return result;
}

TrendComparison outbreak_trend_compare(const Warehouse& w, std::span<const MatchedPair> pairs,
                                       Date baseline_week, const DateRange& range) {
  if (!range.well_ordered()) throw ArgumentError("start is after end");
  std::set<std::string> outbreak_ids;
  std::set<std::string> control_ids;
  for (const auto& p : pairs) {
    outbreak_ids.insert(p.outbreak_poi);
    control_ids.insert(p.control_poi);
  }
  const auto periods = w.periods_within(range);

  auto build = [&](const std::set<std::string>& ids, const std::string& group) {
    std::map<Date, std::int64_t> weekly;
    for (const auto& id : ids) {
      for (const auto& [week, visits] : long_visits_by_week(w, id)) weekly[week] += visits;
    }
    const auto base = weekly.find(baseline_week);
    if (base == weekly.end() || base->second == 0) {
      throw ArgumentError(group + " group has no long-duration visits in baseline week " +
                          baseline_week.iso());
    }
    const auto denominator = static_cast<double>(base->second);
    WeeklySeries series;
    series.label = group;
    for (const auto& period : periods) {
      auto it = weekly.find(period.start);
      const auto visits = static_cast<double>(it == weekly.end() ? 0 : it->second);
      series.points.push_back({period.start, visits / denominator});
    }
    return series;
  };

  return {build(outbreak_ids, "outbreak"), build(control_ids, "control")};
}

}  // namespace mw::analytics
