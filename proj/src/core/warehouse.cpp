#include "mw/core/warehouse.hpp"

#include "mw/core/error.hpp"

namespace mw {
namespace {

const std::set<std::string> kNoPois;

std::string key_text(const std::string& key) { return key; }
std::string key_text(Date key) { return key.iso(); }

template <typename Map, typename Key, typename Row>
void insert_entity(Map& map, const Key& key, const Row& row, std::string_view what) {
  auto [it, inserted] = map.emplace(key, row);
  if (!inserted && !(it->second == row)) {
    throw IngestConflictError("conflicting " + std::string(what) + " rows for '" + key_text(key) + "'");
  }
}

std::string fact_name(const std::string& place_id, Date period_start) {
  return "(" + place_id + ", " + period_start.iso() + ")";
}

template <typename Map, typename Key, typename Row>
void insert_fact(Map& map, const Key& key, const Row& row, std::string_view table) {
  if (!map.emplace(key, row).second) {
    throw IngestConflictError("duplicate " + std::string(table) + " row for " +
                              fact_name(std::get<0>(key), std::get<1>(key)));
  }
}

}  // namespace

void Warehouse::add_country(const std::string& code) {
  if (code.empty()) throw LoadError("empty country code");
  countries_.insert(code);
}

void Warehouse::add_state(const StateRow& row) {
  if (!countries_.contains(row.country)) throw LoadError("unknown country '" + row.country + "'");
  insert_entity(states_, row.code, row, "state");
}

void Warehouse::add_cbg(const CbgRow& row) {
  if (!states_.contains(row.state)) throw LoadError("unknown state '" + row.state + "'");
  insert_entity(cbgs_, row.id, row, "cbg");
}

void Warehouse::add_poi(const PoiRow& row) {
  if (!cbgs_.contains(row.cbg)) throw LoadError("unknown cbg '" + row.cbg + "'");
  insert_entity(pois_, row.place_id, row, "poi");
  by_naics_[row.naics].insert(row.place_id);
  by_cbg_[row.cbg].insert(row.place_id);
}

void Warehouse::add_brand(const std::string& name) {
  if (name.empty()) throw LoadError("empty brand name");
  brands_.insert(name);
}

void Warehouse::link_brand(const std::string& brand, const std::string& place_id) {
  if (!brands_.contains(brand)) throw LoadError("unknown brand '" + brand + "'");
  if (!pois_.contains(place_id)) throw LoadError("unknown poi '" + place_id + "'");
  brand_poi_.emplace(brand, place_id);
}

void Warehouse::add_period(const PeriodRow& row) {
  if (row.end - row.start != kPeriodDays) {
    throw LoadError("period " + row.start.iso() + " does not span 7 days");
  }
  insert_entity(periods_, row.start, row, "period");
}

void Warehouse::require_poi_period(const std::string& place_id, Date period_start) const {
  if (!pois_.contains(place_id)) throw LoadError("unknown poi '" + place_id + "'");
  if (!periods_.contains(period_start)) {
    throw LoadError("unknown period '" + period_start.iso() + "'");
  }
}

void Warehouse::add_visit_fact(const VisitFact& fact) {
  require_poi_period(fact.place_id, fact.period_start);
  insert_fact(visit_facts_, PoiPeriodKey{fact.place_id, fact.period_start}, fact, "visit_facts");
}

void Warehouse::add_dwell_fact(const DwellFact& fact) {
  require_poi_period(fact.place_id, fact.period_start);
  insert_fact(dwell_facts_, DwellKey{fact.place_id, fact.period_start, fact.bucket}, fact,
              "dwell_facts");
}

void Warehouse::add_interval_fact(const IntervalFact& fact) {
  require_poi_period(fact.place_id, fact.period_start);
  if (fact.day_index < 0 || fact.day_index >= kPeriodDays) {
    throw LoadError("day_index " + std::to_string(fact.day_index) + " outside 0..6");
  }
  insert_fact(interval_facts_, IntervalKey{fact.place_id, fact.period_start, fact.day_index}, fact,
              "interval_facts");
}

void Warehouse::add_origin_fact(const OriginFact& fact) {
  require_poi_period(fact.place_id, fact.period_start);
  if (!cbgs_.contains(fact.origin_cbg)) throw LoadError("unknown cbg '" + fact.origin_cbg + "'");
  insert_fact(origin_facts_, OriginKey{fact.place_id, fact.period_start, fact.origin_cbg}, fact,
              "origin_facts");
}

const PoiRow* Warehouse::find_poi(const std::string& place_id) const {
  auto it = pois_.find(place_id);
  return it == pois_.end() ? nullptr : &it->second;
}

const std::set<std::string>& Warehouse::pois_with_naics(NaicsCode naics) const {
  auto it = by_naics_.find(naics);
  return it == by_naics_.end() ? kNoPois : it->second;
}

const std::set<std::string>& Warehouse::pois_in_cbg(const std::string& cbg) const {
  auto it = by_cbg_.find(cbg);
  return it == by_cbg_.end() ? kNoPois : it->second;
}

std::vector<NaicsCode> Warehouse::naics_codes() const {
  std::vector<NaicsCode> out;
  out.reserve(by_naics_.size());
  for (const auto& [code, pois] : by_naics_) out.push_back(code);
  return out;
}

std::vector<PeriodRow> Warehouse::periods_within(const DateRange& range) const {
  std::vector<PeriodRow> out;
  for (auto it = periods_.lower_bound(range.start); it != periods_.end(); ++it) {
    if (range.covers(it->second.start, it->second.end)) out.push_back(it->second);
  }
  return out;
}

TableCounts Warehouse::counts() const {
  return TableCounts{countries_.size(),    states_.size(),      cbgs_.size(),
                     pois_.size(),         brands_.size(),      brand_poi_.size(),
                     periods_.size(),      visit_facts_.size(), dwell_facts_.size(),
                     interval_facts_.size(), origin_facts_.size()};
}

bool Warehouse::operator==(const Warehouse& other) const {
  return countries_ == other.countries_ && states_ == other.states_ && cbgs_ == other.cbgs_ &&
         pois_ == other.pois_ && brands_ == other.brands_ && brand_poi_ == other.brand_poi_ &&
         periods_ == other.periods_ && visit_facts_ == other.visit_facts_ &&
         dwell_facts_ == other.dwell_facts_ && interval_facts_ == other.interval_facts_ &&
         origin_facts_ == other.origin_facts_;
}

}  // namespace mw
