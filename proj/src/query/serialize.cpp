#include "mw/query/serialize.hpp"

#include <sstream>

#include "mw/core/csv.hpp"

namespace mw::query {

OrderedJson dwell_to_json(NaicsCode naics, const DateRange& range, const DwellTotals& totals) {
  OrderedJson buckets = OrderedJson::object();
  for (DwellBucket b : kAllDwellBuckets) buckets[std::string(label(b))] = totals[b];
  OrderedJson doc;
  doc["code"] = naics.value;
  doc["start"] = range.start.iso();
  doc["end"] = range.end.iso();
  doc["buckets"] = std::move(buckets);
  return doc;
}

OrderedJson top_categories_to_json(const DateRange& range, std::size_t k, const RankedResult& result) {
  OrderedJson rows = OrderedJson::array();
  for (const auto& row : result.rows) {
    OrderedJson r;
    r["code"] = row.key;
    r["visits"] = row.value;
    rows.push_back(std::move(r));
  }
  OrderedJson doc;
  doc["start"] = range.start.iso();
  doc["end"] = range.end.iso();
  doc["k"] = k;
  doc["rows"] = std::move(rows);
  return doc;
}

OrderedJson hangouts_to_json(NaicsCode naics, const std::optional<std::string>& state,
                             const DateRange& range, std::size_t k, const RankedResult& result) {
  OrderedJson rows = OrderedJson::array();
  for (const auto& row : result.rows) {
    OrderedJson r;
    r["place_id"] = row.key;
    r["long_visits"] = row.value;
    rows.push_back(std::move(r));
  }
  OrderedJson doc;
  doc["code"] = naics.value;
  doc["state"] = state ? OrderedJson(*state) : OrderedJson(nullptr);
  doc["start"] = range.start.iso();
  doc["end"] = range.end.iso();
  doc["k"] = k;
  doc["rows"] = std::move(rows);
  return doc;
}

OrderedJson impact_to_json(const ImpactResult& result) {
  OrderedJson rows = OrderedJson::array();
  for (const auto& row : result.rows) {
    OrderedJson r;
    r["code"] = row.naics.str();
    r["baseline_mean"] = row.baseline_mean;
    r["intervention_mean"] = row.intervention_mean;
    r["ratio"] = row.ratio;
    rows.push_back(std::move(r));
  }
  OrderedJson doc;
  doc["rows"] = std::move(rows);
  if (!result.note.empty()) doc["note"] = result.note;
  return doc;
}

OrderedJson answerability_to_json(const Answerability& a) {
  OrderedJson doc;
  doc["query_id"] = a.query_id;
  doc["status"] = a.status == AnswerStatus::kAnswerable ? "Answerable" : "RequiresExternalData";
  doc["topic"] = a.topic;
  if (a.status != AnswerStatus::kAnswerable) doc["missing_data"] = a.missing_data;
  return doc;
}

std::string dwell_to_csv(const DwellTotals& totals) {
  std::ostringstream out;
  csv::write_row(out, {"dwell_bucket", "visits"});
  for (DwellBucket b : kAllDwellBuckets) {
    csv::write_row(out, {std::string(label(b)), std::to_string(totals[b])});
  }
  return out.str();
}

std::string ranked_to_csv(const RankedResult& result, const std::string& key_name,
                          const std::string& value_name) {
  std::ostringstream out;
  csv::write_row(out, {"rank", key_name, value_name});
  std::size_t rank = 0;
  for (const auto& row : result.rows) {
    csv::write_row(out, {std::to_string(++rank), row.key, std::to_string(row.value)});
  }
  return out.str();
}

std::string impact_to_csv(const ImpactResult& result) {
  std::ostringstream out;
  csv::write_row(out, {"code", "baseline_mean", "intervention_mean", "ratio"});
  for (const auto& row : result.rows) {
    csv::write_row(out, {row.naics.str(), csv::format_sig6(row.baseline_mean),
                         csv::format_sig6(row.intervention_mean), csv::format_sig6(row.ratio)});
  }
  return out.str();
}

}  // namespace mw::query
