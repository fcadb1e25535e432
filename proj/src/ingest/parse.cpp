#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"
#include "mw/core/geo.hpp"
#include "mw/ingest/ingest.hpp"

namespace mw::ingest {
namespace {

using nlohmann::json;

// Collects field-level problems while decoding one CSV row.
class RowDecoder {
 public:
  RowDecoder(const std::vector<std::string>& fields, const std::vector<std::size_t>& columns,
             std::size_t row, std::vector<Issue>& issues)
      : fields_(fields), columns_(columns), row_(row), issues_(issues) {}

  [[nodiscard]] bool failed() const { return failed_; }

  const std::string& raw(std::size_t col) const { return fields_[columns_[col]]; }

  void error(std::string_view field, std::string message) {
    issues_.push_back({row_, std::string(field), Severity::kError, std::move(message)});
    failed_ = true;
  }

  std::string nonempty(std::size_t col, std::string_view field) {
    if (raw(col).empty()) error(field, "must not be empty");
    return raw(col);
  }

  std::int64_t count(std::size_t col, std::string_view field) {
    auto v = csv::parse_int(raw(col));
    if (!v || *v < 0) {
      error(field, "expected a nonnegative integer, got '" + raw(col) + "'");
      return 0;
    }
    return *v;
  }

  double measure(std::size_t col, std::string_view field) {
    auto v = csv::parse_double(raw(col));
    if (!v || !(*v >= 0)) {
      error(field, "expected a nonnegative number, got '" + raw(col) + "'");
      return 0;
    }
    return *v;
  }

  std::optional<double> optional_number(std::size_t col, std::string_view field, double lo,
                                        double hi) {
    if (raw(col).empty()) return std::nullopt;
    auto v = csv::parse_double(raw(col));
    if (!v || !(*v >= lo && *v <= hi)) {
      error(field, "value '" + raw(col) + "' out of range");
      return std::nullopt;
    }
    return v;
  }

  Date date(std::size_t col, std::string_view field) {
    auto d = Date::parse(raw(col));
    if (!d) {
      error(field, "invalid date '" + raw(col) + "'");
      return {};
    }
    return *d;
  }

  std::string cbg(std::size_t col, std::string_view field) {
    if (!is_cbg_id(raw(col))) error(field, "invalid census block group '" + raw(col) + "'");
    return raw(col);
  }

  std::optional<json> parse_json(std::size_t col, std::string_view field) {
    try {
      return json::parse(raw(col));
    } catch (const json::parse_error&) {
      error(field, "malformed JSON");
      return std::nullopt;
    }
  }

  // JSON object of string -> nonnegative integer. Empty cell is an empty map.
  std::map<std::string, std::int64_t> count_map(std::size_t col, std::string_view field) {
    std::map<std::string, std::int64_t> out;
    if (raw(col).empty()) return out;
    auto doc = parse_json(col, field);
    if (!doc) return out;
    if (!doc->is_object()) {
      error(field, "expected a JSON object");
      return out;
    }
    for (const auto& [key, value] : doc->items()) {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        error(field, "value for '" + key + "' is not a nonnegative integer");
        continue;
      }
      out[key] = value.get<std::int64_t>();
    }
    return out;
  }

 private:
  const std::vector<std::string>& fields_;
  const std::vector<std::size_t>& columns_;
  std::size_t row_;
  std::vector<Issue>& issues_;
  bool failed_ = false;
};

template <std::size_t N>
std::vector<std::size_t> resolve_columns(const csv::Reader& reader,
                                         const std::array<std::string_view, N>& header) {
  std::vector<std::size_t> columns;
  for (auto name : header) {
    auto col = reader.column(name);
    if (!col) throw FormatError("missing required column '" + std::string(name) + "'");
    columns.push_back(*col);
  }
  return columns;
}

std::size_t distinct_error_rows(const std::vector<Issue>& issues) {
  std::set<std::size_t> rows;
  for (const auto& i : issues) {
    if (i.severity == Severity::kError) rows.insert(i.row);
  }
  return rows.size();
}

// Shared row loop: decode() returns a record or nullopt after logging issues.
template <typename Record, std::size_t N, typename Decode>
ParseResult<Record> parse_rows(std::string content, const std::array<std::string_view, N>& header,
                               Decode decode) {
  csv::Reader reader(std::move(content));
  const auto columns = resolve_columns(reader, header);
  ParseResult<Record> result;
  auto& report = result.report;
  std::vector<std::string> fields;
  while (true) {
    try {
      if (!reader.next(fields)) break;
    } catch (const FormatError& e) {
      // An unterminated quote swallows the rest of the file.
      ++report.records_total;
      report.issues.push_back({reader.row_number(), "row", Severity::kError, e.what()});
      break;
    }
    ++report.records_total;
    const std::size_t row = reader.row_number();
    if (fields.size() != reader.header().size()) {
      report.issues.push_back({row, "row", Severity::kError,
                               "expected " + std::to_string(reader.header().size()) +
                                   " fields, got " + std::to_string(fields.size())});
      continue;
    }
    RowDecoder decoder(fields, columns, row, report.issues);
    auto record = decode(decoder, row, report.issues);
    if (record && !decoder.failed()) {
      result.records.push_back(std::move(*record));
      ++report.records_ok;
    }
  }
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return std::move(buffer).str();
}

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn fn) {
  try {
    return fn(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// Column positions within kWeeklyHeader.
enum WeeklyCol : std::size_t {
  kPlaceId, kName, kBrands, kNaics, kPoiCbg, kLat, kLon, kStart, kEnd, kVisits, kVisitors,
  kMedianDwell, kBuckets, kByDay, kHomeCbgs, kDistance
};

std::optional<FlatWeeklyRecord> decode_weekly(RowDecoder& d, std::size_t row,
                                              std::vector<Issue>& issues) {
  FlatWeeklyRecord r;
  r.place_id = d.nonempty(kPlaceId, "safegraph_place_id");
  r.location_name = d.raw(kName);
  if (!d.raw(kBrands).empty()) r.brand = d.raw(kBrands);

  auto naics = csv::parse_int(d.raw(kNaics));
  r.naics = NaicsCode{naics ? static_cast<std::int32_t>(*naics) : 0};
  if (!naics || !r.naics.valid()) d.error("naics_code", "expected a 6-digit code, got '" + d.raw(kNaics) + "'");

  r.poi_cbg = d.cbg(kPoiCbg, "poi_cbg");
  r.latitude = d.optional_number(kLat, "latitude", -90.0, 90.0);
  r.longitude = d.optional_number(kLon, "longitude", -180.0, 180.0);
  r.period_start = d.date(kStart, "date_range_start");
  r.period_end = d.date(kEnd, "date_range_end");
  r.raw_visit_counts = d.count(kVisits, "raw_visit_counts");
  r.raw_visitor_counts = d.count(kVisitors, "raw_visitor_counts");
  r.median_dwell_minutes = d.measure(kMedianDwell, "median_dwell");
  r.bucketed_dwell_times = d.count_map(kBuckets, "bucketed_dwell_times");

  if (auto doc = d.parse_json(kByDay, "visits_by_day")) {
    if (!doc->is_array() || doc->size() != 7) {
      d.error("visits_by_day", "expected a JSON array of 7 counts");
    } else {
      for (std::size_t i = 0; i < 7; ++i) {
        const auto& v = (*doc)[i];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          d.error("visits_by_day", "day " + std::to_string(i) + " is not a nonnegative integer");
        } else {
          r.visits_by_day[i] = v.get<std::int64_t>();
        }
      }
    }
  }

  r.visitor_home_cbgs = d.count_map(kHomeCbgs, "visitor_home_cbgs");
  for (const auto& [cbg, n] : r.visitor_home_cbgs) {
    if (!is_cbg_id(cbg)) d.error("visitor_home_cbgs", "invalid census block group '" + cbg + "'");
  }
  if (!d.raw(kDistance).empty()) r.distance_from_home_meters = d.measure(kDistance, "distance_from_home");

  if (d.failed()) return std::nullopt;
  bool has_error = false;
  for (auto issue : validate_record(r)) {
    issue.row = row;
    has_error = has_error || issue.severity == Severity::kError;
    issues.push_back(std::move(issue));
  }
  if (has_error) return std::nullopt;
  return r;
}

enum SdCol : std::size_t { kOrigin, kDate, kDevices, kDistanceTraveled, kHomeDwell, kCompletelyHome };

std::optional<SocialDistancingRecord> decode_sd(RowDecoder& d, std::size_t, std::vector<Issue>&) {
  SocialDistancingRecord r;
  r.origin_cbg = d.cbg(kOrigin, "origin_census_block_group");
  r.date = d.date(kDate, "date");
  r.device_count = d.count(kDevices, "device_count");
  r.median_distance_traveled_from_home_meters = d.measure(kDistanceTraveled, "distance_traveled_from_home");
  r.median_home_dwell_time_minutes = d.measure(kHomeDwell, "median_home_dwell_time");
  r.completely_home_device_count = d.count(kCompletelyHome, "completely_home_device_count");
  if (d.failed()) return std::nullopt;
  if (r.completely_home_device_count > r.device_count) {
    d.error("completely_home_device_count", "exceeds device_count");
    return std::nullopt;
  }
  return r;
}

}  // namespace

std::size_t ValidationReport::error_records() const { return distinct_error_rows(issues); }

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == Severity::kError;
  return n;
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

ParseResult<FlatWeeklyRecord> parse_flat_weekly_text(std::string content) {
  return parse_rows<FlatWeeklyRecord>(std::move(content), kWeeklyHeader, decode_weekly);
}

ParseResult<FlatWeeklyRecord> parse_flat_weekly(const std::filesystem::path& path) {
  return with_path(path, [](std::string content) { return parse_flat_weekly_text(std::move(content)); });
}

ParseResult<SocialDistancingRecord> parse_social_distancing_text(std::string content) {
  return parse_rows<SocialDistancingRecord>(std::move(content), kSocialDistancingHeader, decode_sd);
}

ParseResult<SocialDistancingRecord> parse_social_distancing(const std::filesystem::path& path) {
  return with_path(path,
                   [](std::string content) { return parse_social_distancing_text(std::move(content)); });
}

std::vector<Issue> validate_record(const FlatWeeklyRecord& r) {
  std::vector<Issue> issues;
  auto add = [&](std::string field, Severity severity, std::string message) {
    issues.push_back({0, std::move(field), severity, std::move(message)});
  };

  if (r.period_end - r.period_start != kPeriodDays) {
    add("date_range_end", Severity::kError, "period must be 7 days");
  }
  std::int64_t bucket_sum = 0;
  for (const auto& [key, n] : r.bucketed_dwell_times) {
    if (!parse_dwell_bucket(key)) add("bucketed_dwell_times", Severity::kError, "unknown bucket '" + key + "'");
    bucket_sum += n;
  }
  if (r.raw_visitor_counts > r.raw_visit_counts) {
    add("raw_visitor_counts", Severity::kError, "raw_visitor_counts exceeds raw_visit_counts");
  }
  std::int64_t day_sum = 0;
  for (auto n : r.visits_by_day) day_sum += n;
  if (day_sum != r.raw_visit_counts) {
    add("visits_by_day", Severity::kWarning,
        "visits_by_day sums to " + std::to_string(day_sum) + ", raw_visit_counts is " +
            std::to_string(r.raw_visit_counts));
  }
  if (bucket_sum != r.raw_visit_counts) {
    add("bucketed_dwell_times", Severity::kWarning,
        "bucketed_dwell_times sums to " + std::to_string(bucket_sum) + ", raw_visit_counts is " +
            std::to_string(r.raw_visit_counts));
  }
  return issues;
}

}  // namespace mw::ingest
