#include "mw/query/query.hpp"

#include <algorithm>
#include <array>

#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"

namespace mw::query {
namespace {

void require_ordered(const DateRange& range) {
  if (!range.well_ordered()) {
    throw ArgumentError("start " + range.start.iso() + " is after end " + range.end.iso());
  }
}

void require_k(std::size_t k) {
  if (k < 1) throw ArgumentError("k must be at least 1");
}

bool in_range(const Warehouse& w, const DateRange& range, Date period_start) {
  const auto& period = w.periods().at(period_start);
  return range.covers(period.start, period.end);
}

// Σ raw visits over in-range facts of one POI; nullopt if it has none.
std::optional<std::int64_t> poi_visits(const Warehouse& w, const std::string& place_id,
                                       const DateRange& range) {
  std::optional<std::int64_t> total;
  for (const auto& [key, fact] : w.visit_facts_of(place_id)) {
    if (!in_range(w, range, fact.period_start)) continue;
    total = total.value_or(0) + fact.raw_visits;
  }
  return total;
}

}  // namespace

DwellTotals dwell_aggregation(const Warehouse& w, NaicsCode naics, const DateRange& range) {
  require_ordered(range);
  DwellTotals totals;
  for (const auto& place_id : w.pois_with_naics(naics)) {
    for (const auto& [key, fact] : w.dwell_facts_of(place_id)) {
      if (in_range(w, range, fact.period_start)) totals[fact.bucket] += fact.visits;
    }
  }
  return totals;
}

RankedResult rank(const std::map<std::string, std::int64_t>& values, std::size_t k) {
  RankedResult result;
  result.rows.reserve(values.size());
  for (const auto& [key, value] : values) result.rows.push_back({key, value});
  // Input is key-ordered, so a stable sort on value gives key-ascending ties.
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const RankedRow& a, const RankedRow& b) { return a.value > b.value; });
  if (result.rows.size() > k) result.rows.resize(k);
  return result;
}

CbgDistribution q1_pois_and_distribution(const Warehouse& w, const std::string& cbg,
                                         const DateRange& range) {
  if (!is_cbg_id(cbg)) throw ArgumentError("invalid census block group '" + cbg + "'");
  require_ordered(range);
  CbgDistribution result;
  std::map<NaicsCode, std::int64_t> by_category;
  for (const auto& place_id : w.pois_in_cbg(cbg)) {
    const PoiRow& poi = w.pois().at(place_id);
    const std::int64_t visits = poi_visits(w, place_id, range).value_or(0);
    result.pois.push_back({place_id, poi.naics, visits});
    by_category[poi.naics] += visits;
    result.total_visits += visits;
  }
  for (const auto& [naics, visits] : by_category) {
    const double share =
        result.total_visits > 0
            ? static_cast<double>(visits) / static_cast<double>(result.total_visits)
            : 0.0;
    result.distribution.push_back({naics, visits, share});
  }
  return result;
}

RankedResult q2_top_categories(const Warehouse& w, const DateRange& range, std::size_t k) {
  require_k(k);
  require_ordered(range);
  std::map<std::string, std::int64_t> totals;
  for (NaicsCode naics : w.naics_codes()) {
    std::optional<std::int64_t> total;
    for (const auto& place_id : w.pois_with_naics(naics)) {
      if (auto v = poi_visits(w, place_id, range)) total = total.value_or(0) + *v;
    }
    if (total) totals[naics.str()] = *total;
  }
  return rank(totals, k);
}

RankedResult q3_top_hangouts(const Warehouse& w, NaicsCode naics,
                             const std::optional<std::string>& state, const DateRange& range,
                             std::size_t k) {
  require_k(k);
  require_ordered(range);
  std::map<std::string, std::int64_t> long_visits;
  for (const auto& place_id : w.pois_with_naics(naics)) {
    const PoiRow& poi = w.pois().at(place_id);
    if (state && state_of(poi.cbg) != *state) continue;
    if (!poi_visits(w, place_id, range)) continue;
    std::int64_t total = 0;
    for (const auto& [key, fact] : w.dwell_facts_of(place_id)) {
      if (long_duration(fact.bucket) && in_range(w, range, fact.period_start)) total += fact.visits;
    }
    long_visits[place_id] = total;
  }
  return rank(long_visits, k);
}

ImpactResult q4_least_impacted_category(const Warehouse& w, const DateRange& baseline,
                                        const DateRange& intervention,
                                        std::int64_t min_baseline_visits) {
  require_ordered(baseline);
  require_ordered(intervention);
  if (!(baseline.end < intervention.start)) {
    throw ArgumentError("baseline window must end before the intervention window starts");
  }

  ImpactResult result;
  const auto baseline_weeks = static_cast<double>(w.periods_within(baseline).size());
  const auto intervention_weeks = static_cast<double>(w.periods_within(intervention).size());
  if (baseline_weeks == 0 || intervention_weeks == 0) {
    result.note = "no complete weekly periods inside one of the windows";
    return result;
  }

  for (NaicsCode naics : w.naics_codes()) {
    std::int64_t before = 0;
    std::int64_t after = 0;
    for (const auto& place_id : w.pois_with_naics(naics)) {
      before += poi_visits(w, place_id, baseline).value_or(0);
      after += poi_visits(w, place_id, intervention).value_or(0);
    }
    if (before == 0 || before < min_baseline_visits) continue;
    const double baseline_mean = static_cast<double>(before) / baseline_weeks;
    const double intervention_mean = static_cast<double>(after) / intervention_weeks;
    result.rows.push_back({naics, baseline_mean, intervention_mean, intervention_mean / baseline_mean});
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const ImpactRow& a, const ImpactRow& b) { return a.ratio > b.ratio; });
  if (result.rows.empty()) {
    result.note = "no category reaches " + std::to_string(min_baseline_visits) +
                  " baseline visits with a nonzero baseline mean";
  }
  return result;
}

std::string Answerability::describe() const {
  if (status == AnswerStatus::kAnswerable) return "Answerable";
  return "RequiresExternalData: " + missing_data;
}

Answerability answerability(int query_id) {
  struct Entry {
    const char* topic;
    const char* missing;
  };
  static constexpr std::array<Entry, 8> kQueries = {{
      {"business categories and visit distribution in a census block group", ""},
      {"business category with the most visits", ""},
      {"top bars in a state by long-duration visits", ""},
      {"category least impacted since the stay-at-home order", ""},
      {"median distance traveled, commuters versus delivery vehicles", "mode of transportation"},
      {"census block group with the most cases", "confirmed COVID-19 cases"},
      {"smartphones reporting from a location during an event", "device pings located at the event"},
      {"unemployment differences by gender, category and brand",
       "unemployment rate by gender and brand"},
  }};
  if (query_id < 1 || query_id > 8) {
    throw ArgumentError("query id " + std::to_string(query_id) + " outside 1..8");
  }
  const Entry& e = kQueries[static_cast<std::size_t>(query_id - 1)];
  const bool answerable = e.missing[0] == '\0';
  return {query_id, answerable ? AnswerStatus::kAnswerable : AnswerStatus::kRequiresExternalData,
          e.topic, e.missing};
}

}  // namespace mw::query
