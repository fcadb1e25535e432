#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mw/core/date.hpp"
#include "mw/core/dwell.hpp"
#include "mw/core/records.hpp"

namespace mw {

struct StateRow {
  std::string code;  // 2-digit state FIPS
  std::string country;
  bool operator==(const StateRow&) const = default;
};

struct CbgRow {
  std::string id;
  std::string state;
  bool operator==(const CbgRow&) const = default;
};

struct PoiRow {
  std::string place_id;
  std::string location_name;
  NaicsCode naics;
  std::string cbg;
  std::optional<double> latitude;
  std::optional<double> longitude;
  bool operator==(const PoiRow&) const = default;
};

struct PeriodRow {
  Date start;
  Date end;
  bool operator==(const PeriodRow&) const = default;
};

struct VisitFact {
  std::string place_id;
  Date period_start;
  std::int64_t raw_visits = 0;
  std::int64_t raw_visitors = 0;
  double median_dwell = 0.0;
  std::optional<double> distance_from_home;
  bool operator==(const VisitFact&) const = default;
};

struct DwellFact {
  std::string place_id;
  Date period_start;
  DwellBucket bucket = DwellBucket::kUnder5;
  std::int64_t visits = 0;
  bool operator==(const DwellFact&) const = default;
};

struct IntervalFact {
  std::string place_id;
  Date period_start;
  int day_index = 0;  // 0..6 from period_start
  std::int64_t visits = 0;
  bool operator==(const IntervalFact&) const = default;
};

struct OriginFact {
  std::string place_id;
  Date period_start;
  std::string origin_cbg;
  std::int64_t visitor_count = 0;
  bool operator==(const OriginFact&) const = default;
};

using PoiPeriodKey = std::tuple<std::string, Date>;
using DwellKey = std::tuple<std::string, Date, DwellBucket>;
using IntervalKey = std::tuple<std::string, Date, int>;
using OriginKey = std::tuple<std::string, Date, std::string>;
using BrandPoiKey = std::tuple<std::string, std::string>;

struct TableCounts {
  std::size_t countries = 0;
  std::size_t states = 0;
  std::size_t cbgs = 0;
  std::size_t pois = 0;
  std::size_t brands = 0;
  std::size_t brand_poi = 0;
  std::size_t periods = 0;
  std::size_t visit_facts = 0;
  std::size_t dwell_facts = 0;
  std::size_t interval_facts = 0;
  std::size_t origin_facts = 0;
  bool operator==(const TableCounts&) const = default;
};

// Third-normal-form store of weekly-pattern data: entity tables plus fact
// tables keyed by (poi, period). Every table is an ordered map on its
// primary key; iteration order is the snapshot sort order.
//
// Insertion enforces referential integrity (LoadError on an unknown key)
// and entity uniqueness: re-adding an identical entity is a no-op, adding a
// conflicting one throws IngestConflictError. Facts must be unique.
class Warehouse {
  static constexpr Date kMinDate = Date::from_days(std::numeric_limits<std::int32_t>::min());

  // Contiguous run of entries whose key starts with the place id of lower.
  template <typename Map, typename Key>
  static auto place_range(const Map& map, const Key& lower) {
    const std::string& place_id = std::get<0>(lower);
    auto first = map.lower_bound(lower);
    auto last = first;
    while (last != map.end() && std::get<0>(last->first) == place_id) ++last;
    return std::ranges::subrange(first, last);
  }

 public:
  void add_country(const std::string& code);
  void add_state(const StateRow& row);
  void add_cbg(const CbgRow& row);
  void add_poi(const PoiRow& row);
  void add_brand(const std::string& name);
  void link_brand(const std::string& brand, const std::string& place_id);
  void add_period(const PeriodRow& row);
  void add_visit_fact(const VisitFact& fact);
  void add_dwell_fact(const DwellFact& fact);
  void add_interval_fact(const IntervalFact& fact);
  void add_origin_fact(const OriginFact& fact);

  [[nodiscard]] const std::set<std::string>& countries() const { return countries_; }
  [[nodiscard]] const std::map<std::string, StateRow>& states() const { return states_; }
  [[nodiscard]] const std::map<std::string, CbgRow>& cbgs() const { return cbgs_; }
  [[nodiscard]] const std::map<std::string, PoiRow>& pois() const { return pois_; }
  [[nodiscard]] const std::set<std::string>& brands() const { return brands_; }
  [[nodiscard]] const std::set<BrandPoiKey>& brand_poi() const { return brand_poi_; }
  [[nodiscard]] const std::map<Date, PeriodRow>& periods() const { return periods_; }
  [[nodiscard]] const std::map<PoiPeriodKey, VisitFact>& visit_facts() const { return visit_facts_; }
  [[nodiscard]] const std::map<DwellKey, DwellFact>& dwell_facts() const { return dwell_facts_; }
  [[nodiscard]] const std::map<IntervalKey, IntervalFact>& interval_facts() const {
    return interval_facts_;
  }
  [[nodiscard]] const std::map<OriginKey, OriginFact>& origin_facts() const { return origin_facts_; }

  [[nodiscard]] const PoiRow* find_poi(const std::string& place_id) const;

  // Index lookups; empty set for unknown keys.
  [[nodiscard]] const std::set<std::string>& pois_with_naics(NaicsCode naics) const;
  [[nodiscard]] const std::set<std::string>& pois_in_cbg(const std::string& cbg) const;
  [[nodiscard]] std::vector<NaicsCode> naics_codes() const;

  // Facts of one POI, ordered by period (and bucket / day / origin).
  [[nodiscard]] auto visit_facts_of(const std::string& place_id) const {
    return place_range(visit_facts_, PoiPeriodKey{place_id, kMinDate});
  }
  [[nodiscard]] auto dwell_facts_of(const std::string& place_id) const {
    return place_range(dwell_facts_, DwellKey{place_id, kMinDate, DwellBucket::kUnder5});
  }

  // Periods fully inside [range.start, range.end].
  [[nodiscard]] std::vector<PeriodRow> periods_within(const DateRange& range) const;

  [[nodiscard]] TableCounts counts() const;

  // Set-equality of rows per table.
  bool operator==(const Warehouse& other) const;

 private:
  void require_poi_period(const std::string& place_id, Date period_start) const;

  std::set<std::string> countries_;
  std::map<std::string, StateRow> states_;
  std::map<std::string, CbgRow> cbgs_;
  std::map<std::string, PoiRow> pois_;
  std::set<std::string> brands_;
  std::set<BrandPoiKey> brand_poi_;
  std::map<Date, PeriodRow> periods_;
  std::map<PoiPeriodKey, VisitFact> visit_facts_;
  std::map<DwellKey, DwellFact> dwell_facts_;
  std::map<IntervalKey, IntervalFact> interval_facts_;
  std::map<OriginKey, OriginFact> origin_facts_;

  std::map<NaicsCode, std::set<std::string>> by_naics_;
  std::map<std::string, std::set<std::string>> by_cbg_;
};

}  // namespace mw
