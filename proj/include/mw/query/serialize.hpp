#pragma once

#include <string>

#include <json.hpp>

#include "mw/query/query.hpp"

// JSON and CSV renderings of query results shared by the CLI and the HTTP
// service.
namespace mw::query {

using OrderedJson = nlohmann::ordered_json;

// {code, start, end, buckets: {label: visits}} with buckets in canonical order.
OrderedJson dwell_to_json(NaicsCode naics, const DateRange& range, const DwellTotals& totals);

// {start, end, k, rows: [{code, visits}]}
OrderedJson top_categories_to_json(const DateRange& range, std::size_t k, const RankedResult& result);

// {code, state, start, end, k, rows: [{place_id, long_visits}]}; state null for all.
OrderedJson hangouts_to_json(NaicsCode naics, const std::optional<std::string>& state,
                             const DateRange& range, std::size_t k, const RankedResult& result);

OrderedJson impact_to_json(const ImpactResult& result);
OrderedJson answerability_to_json(const Answerability& a);

std::string dwell_to_csv(const DwellTotals& totals);
std::string ranked_to_csv(const RankedResult& result, const std::string& key_name,
                          const std::string& value_name);
std::string impact_to_csv(const ImpactResult& result);

}  // namespace mw::query
