#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mw/core/calendar.hpp"
#include "mw/core/date.hpp"
#include "mw/core/population.hpp"
#include "mw/core/records.hpp"
#include "mw/core/warehouse.hpp"

namespace mw::analytics {

struct SeriesPoint {
  Date week_start;
  double value = 0.0;
  bool operator==(const SeriesPoint&) const = default;
};

// Week starts strictly increase.
struct WeeklySeries {
  std::string label;
  std::vector<SeriesPoint> points;
  std::vector<CalendarEntry> annotations;
  bool operator==(const WeeklySeries&) const = default;
};

enum class DwellFilter { kAll, kLongOnly };

// One series per category, with a point for every warehouse period inside
// range (weeks keyed by vendor period_start). kAll sums raw visit counts;
// kLongOnly sums the long-duration dwell buckets. Labels are NAICS codes.
std::vector<WeeklySeries> weekly_category_series(const Warehouse& warehouse,
                                                 const std::set<NaicsCode>& categories,
                                                 DwellFilter filter, const DateRange& range);

// Copy of series with annotations set to the calendar entries falling in
// [first week start, last week start + 6 days]. Points are untouched.
WeeklySeries annotate_with_calendar(WeeklySeries series, const PolicyCalendar& calendar);

struct SamplingRates {
  RegionLevel level = RegionLevel::kState;
  std::map<std::string, double> rates;
  std::vector<std::string> omitted;  // devices observed but population zero or missing
  std::vector<std::string> flagged;  // rate above 1
};

// rate(region) = mean over observed days of the region's summed device
// count, divided by its population. The population table must be at the
// requested level or finer (it is rolled up); an empty table is an
// ArgumentError.
SamplingRates sampling_rate(std::span<const SocialDistancingRecord> records,
                            const PopulationTable& population, RegionLevel level,
                            const DateRange& as_of);

enum class ComplianceMetric { kTimeAtHome, kDistanceFromHome };
enum class Aggregation { kMedianOfMedians, kDeviceWeightedMean };

// Weekly aggregate of per-CBG daily medians. Weeks are 7-day bins anchored
// at range.start; weeks without records produce no point. Callers pass
// records that already went through suppression.
WeeklySeries compliance_series(std::span<const SocialDistancingRecord> records,
                               ComplianceMetric metric, Aggregation aggregation,
                               const DateRange& range);

struct MatchParams {
  double max_distance_meters = 5000.0;
  double ratio_low = 0.8;
  double ratio_high = 1.25;
  DateRange baseline_window;

  // Throws ArgumentError unless ratio_low <= 1 <= ratio_high and
  // max_distance_meters > 0.
  void validate() const;
};

struct MatchedPair {
  std::string outbreak_poi;
  std::string control_poi;
  double distance_meters = 0.0;
  double baseline_visit_ratio = 0.0;  // control mean / outbreak mean
  bool operator==(const MatchedPair&) const = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::string> unmatched;
};

// Greedy one-to-one matching. Outbreak POIs are taken in id order; each gets
// the nearest unused candidate with the same NAICS code, within
// max_distance_meters, and with a baseline weekly-visit ratio inside the
// band. Distance ties go to the smaller candidate id. Baseline means are
// over the POI's weekly facts inside baseline_window.
MatchResult match_controls(const Warehouse& warehouse, std::span<const std::string> outbreak_pois,
                           std::span<const std::string> candidate_pois, const MatchParams& params);

struct TrendComparison {
  WeeklySeries outbreak;
  WeeklySeries control;
};

// Long-duration visits of each group per week in range, divided by the
// group's total in the week starting baseline_week. Throws ArgumentError
// naming the group when that total is zero.
TrendComparison outbreak_trend_compare(const Warehouse& warehouse,
                                       std::span<const MatchedPair> pairs, Date baseline_week,
                                       const DateRange& range);

// NAICS code display names. Unknown codes display as the code.
class NaicsLookup {
 public:
  static NaicsLookup bundled();
  // CSV "code,name".
  static NaicsLookup load_csv(const std::filesystem::path& path);

  [[nodiscard]] std::string name(NaicsCode code) const;

 private:
  std::map<NaicsCode, std::string> names_;
};

struct RosterEntry {
  std::string place_id;
  std::string month_linked;  // YYYY-MM
  bool operator==(const RosterEntry&) const = default;
};

// CSV "place_id,month_linked".
std::vector<RosterEntry> load_outbreak_roster(const std::filesystem::path& path);
void save_outbreak_roster(const std::filesystem::path& path, std::span<const RosterEntry> roster);

}  // namespace mw::analytics
