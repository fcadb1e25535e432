#include <ctime>

#include <json.hpp>

#include "mw/api/api.hpp"
#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"
#include "mw/core/snapshot.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"

namespace mw::api {
namespace {

using OJ = nlohmann::ordered_json;

constexpr std::size_t kDefaultK = 10;

// Parameter failure reported as 400 with the field name.
struct BadParam {
  std::string field;
  std::string message;
};

ApiResponse error(int status, const std::string& field, const std::string& message) {
  OJ doc;
  doc["error"] = OJ{{"field", field}, {"message", message}};
  return {status, doc.dump()};
}

const std::string& required(const Params& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty()) throw BadParam{name, "missing parameter " + name};
  return it->second;
}

Date date_param(const Params& params, const std::string& name) {
  const auto& text = required(params, name);
  auto date = Date::parse(text);
  if (!date) throw BadParam{name, "not a date (YYYY-MM-DD or MM-DD-YYYY): " + text};
  return *date;
}

DateRange range_params(const Params& params) {
  DateRange range{date_param(params, "Start_Date"), date_param(params, "End_Date")};
  if (!range.well_ordered()) throw BadParam{"End_Date", "End_Date is before Start_Date"};
  return range;
}

NaicsCode code_param(const Params& params) {
  const auto& text = required(params, "Code");
  NaicsCode code;
  if (text.size() == 6 && is_digits(text)) code.value = static_cast<std::int32_t>(*csv::parse_int(text));
  if (!code.valid()) throw BadParam{"Code", "Code must be a 6-digit NAICS code: " + text};
  return code;
}

std::size_t k_param(const Params& params) {
  auto it = params.find("k");
  if (it == params.end()) return kDefaultK;
  auto k = csv::parse_int(it->second);
  if (!k || *k < 1) throw BadParam{"k", "k must be a positive integer: " + it->second};
  return static_cast<std::size_t>(*k);
}

std::optional<std::string> state_param(const Params& params) {
  auto it = params.find("State");
  if (it == params.end() || it->second.empty()) return std::nullopt;
  if (it->second.size() != 2 || !is_digits(it->second)) {
    throw BadParam{"State", "State must be a 2-digit FIPS code: " + it->second};
  }
  return it->second;
}

OJ counts_json(const TableCounts& c) {
  OJ doc;
  doc["countries"] = c.countries;
  doc["states"] = c.states;
  doc["cbgs"] = c.cbgs;
  doc["pois"] = c.pois;
  doc["brands"] = c.brands;
  doc["brand_poi"] = c.brand_poi;
  doc["periods"] = c.periods;
  doc["visit_facts"] = c.visit_facts;
  doc["dwell_facts"] = c.dwell_facts;
  doc["interval_facts"] = c.interval_facts;
  doc["origin_facts"] = c.origin_facts;
  return doc;
}

}  // namespace

std::unique_ptr<ApiService> ApiService::from_snapshot(const std::filesystem::path& dir) {
  auto warehouse = load_snapshot(dir);
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::make_unique<ApiService>(std::move(warehouse), stamp);
}

ApiResponse ApiService::handle(std::string_view path, const Params& params) const {
  try {
    if (path == "/Visits") {
      const auto code = code_param(params);
      const auto range = range_params(params);
      return {200, query::dwell_to_json(code, range, query::dwell_aggregation(warehouse_, code, range)).dump()};
    }
    if (path == "/Categories/Top") {
      const auto k = k_param(params);
      const auto range = range_params(params);
      return {200, query::top_categories_to_json(range, k, query::q2_top_categories(warehouse_, range, k)).dump()};
    }
    if (path == "/Hangouts") {
      const auto code = code_param(params);
      const auto state = state_param(params);
      const auto k = k_param(params);
      const auto range = range_params(params);
      return {200, query::hangouts_to_json(code, state, range, k,
                                           query::q3_top_hangouts(warehouse_, code, state, range, k))
                       .dump()};
    }
    if (path == "/health") {
      OJ doc;
      doc["status"] = "ok";
      doc["snapshot_loaded_at"] = loaded_at_;
      doc["record_counts"] = counts_json(warehouse_.counts());
      return {200, doc.dump()};
    }
    return error(404, "path", "no route for " + std::string(path));
  } catch (const BadParam& e) {
    return error(400, e.field, e.message);
  } catch (const ArgumentError& e) {
    return error(400, "query", e.what());
  }
}

}  // namespace mw::api
