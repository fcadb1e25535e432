#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mw/core/date.hpp"
#include "mw/core/dwell.hpp"
#include "mw/core/warehouse.hpp"

// Read-only queries over a loaded warehouse. A weekly fact counts toward a
// range iff its period lies fully inside it (period_start >= start and
// period_end <= end).
namespace mw::query {

// Visit totals per dwell bucket for one NAICS code. Buckets without data
// are 0. Throws ArgumentError when start > end.
DwellTotals dwell_aggregation(const Warehouse& warehouse, NaicsCode naics, const DateRange& range);

struct RankedRow {
  std::string key;
  std::int64_t value = 0;
  bool operator==(const RankedRow&) const = default;
};

// Rows ordered by value descending, ties by key ascending.
struct RankedResult {
  std::vector<RankedRow> rows;
  bool operator==(const RankedResult&) const = default;
};

// Applies the ranking order and keeps the first k rows.
RankedResult rank(const std::map<std::string, std::int64_t>& values, std::size_t k);

struct PoiVisits {
  std::string place_id;
  NaicsCode naics;
  std::int64_t total_visits = 0;
  bool operator==(const PoiVisits&) const = default;
};

struct CategoryShare {
  NaicsCode naics;
  std::int64_t visits = 0;
  double share = 0.0;  // visits / total; 0 when the CBG has no visits
  bool operator==(const CategoryShare&) const = default;
};

struct CbgDistribution {
  std::vector<PoiVisits> pois;               // by place id
  std::vector<CategoryShare> distribution;   // by NAICS code
  std::int64_t total_visits = 0;
  bool operator==(const CbgDistribution&) const = default;
};

// POIs located in a CBG with their visit totals, and the share of the CBG's
// visits per category. Unknown CBG gives an empty result; a malformed id is
// an ArgumentError.
CbgDistribution q1_pois_and_distribution(const Warehouse& warehouse, const std::string& cbg,
                                         const DateRange& range);

// Categories (NAICS codes with at least one fact in range) ranked by total
// raw visits. k must be >= 1.
RankedResult q2_top_categories(const Warehouse& warehouse, const DateRange& range, std::size_t k);

// POIs of one category ranked by long-duration visits (buckets above 20
// minutes). state, when set, is a 2-digit FIPS code matched against the POI's
// CBG. k must be >= 1.
RankedResult q3_top_hangouts(const Warehouse& warehouse, NaicsCode naics,
                             const std::optional<std::string>& state, const DateRange& range,
                             std::size_t k);

inline constexpr std::int64_t kDefaultMinBaselineVisits = 100;

struct ImpactRow {
  NaicsCode naics;
  double baseline_mean = 0.0;      // mean weekly visits
  double intervention_mean = 0.0;
  double ratio = 0.0;              // intervention_mean / baseline_mean
  bool operator==(const ImpactRow&) const = default;
};

struct ImpactResult {
  std::vector<ImpactRow> rows;  // ratio descending: least impacted first
  std::string note;             // set when rows is empty
};

// Mean weekly visits use the number of warehouse periods inside each window
// as denominator. Categories whose baseline total is below
// min_baseline_visits, or whose baseline mean is zero, are excluded.
// The baseline window must end before the intervention window starts.
ImpactResult q4_least_impacted_category(const Warehouse& warehouse, const DateRange& baseline,
                                        const DateRange& intervention,
                                        std::int64_t min_baseline_visits = kDefaultMinBaselineVisits);

enum class AnswerStatus { kAnswerable, kRequiresExternalData };

struct Answerability {
  int query_id = 0;
  AnswerStatus status = AnswerStatus::kAnswerable;
  std::string topic;
  std::string missing_data;  // empty when answerable

  // "Answerable" or "RequiresExternalData: <missing data>".
  [[nodiscard]] std::string describe() const;
};

// Whether the warehouse schema can answer policy query 1..8.
Answerability answerability(int query_id);

}  // namespace mw::query
