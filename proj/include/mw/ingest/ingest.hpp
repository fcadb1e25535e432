#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mw/core/records.hpp"
#include "mw/core/warehouse.hpp"

namespace mw::ingest {

// Column names of the vendor weekly-pattern CSV, in file order.
inline constexpr std::array<std::string_view, 16> kWeeklyHeader = {
    "safegraph_place_id", "location_name",     "brands",          "naics_code",
    "poi_cbg",            "latitude",          "longitude",       "date_range_start",
    "date_range_end",     "raw_visit_counts",  "raw_visitor_counts", "median_dwell",
    "bucketed_dwell_times", "visits_by_day",   "visitor_home_cbgs", "distance_from_home"};

// Column names of the social-distancing CSV, in file order.
inline constexpr std::array<std::string_view, 6> kSocialDistancingHeader = {
    "origin_census_block_group",   "date",
    "device_count",                "distance_traveled_from_home",
    "median_home_dwell_time",      "completely_home_device_count"};

enum class Severity { kError, kWarning };

struct Issue {
  std::size_t row = 0;  // 1-based data row; 0 when not tied to a file row
  std::string field;
  Severity severity = Severity::kError;
  std::string message;

  bool operator==(const Issue&) const = default;
};

// Per-file parse outcome. records_ok + error_records() == records_total.
struct ValidationReport {
  std::size_t records_total = 0;
  std::size_t records_ok = 0;
  std::vector<Issue> issues;

  [[nodiscard]] std::size_t error_records() const;
  [[nodiscard]] std::size_t error_count() const;
  [[nodiscard]] std::size_t warning_count() const;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  ValidationReport report;
};

// Parses a weekly-pattern CSV. Nested columns hold JSON text. Rows that fail
// to parse or carry validation errors are skipped and reported; warnings are
// reported and the record is kept. Throws IoError for an unreadable file and
// FormatError for a missing header column.
ParseResult<FlatWeeklyRecord> parse_flat_weekly(const std::filesystem::path& path);
ParseResult<FlatWeeklyRecord> parse_flat_weekly_text(std::string content);

ParseResult<SocialDistancingRecord> parse_social_distancing(const std::filesystem::path& path);
ParseResult<SocialDistancingRecord> parse_social_distancing_text(std::string content);

// Checks record invariants. Errors: period not 7 days, unknown bucket label,
// visitors exceeding visits. Warnings: daily or bucket sums differing from
// raw_visit_counts.
std::vector<Issue> validate_record(const FlatWeeklyRecord& record);

// One DwellRow per bucket entry, in canonical bucket order. The record must
// have passed validation (ArgumentError on an unknown bucket label).
std::vector<DwellRow> explode_to_1nf(const FlatWeeklyRecord& record);

struct LoadOptions {
  // Accept exact duplicate rows instead of failing on a repeated
  // (place, period) pair.
  bool dedup_identical = false;
};

// Folds validated records into a 3NF warehouse. Throws IngestConflictError
// naming the pair on a duplicate (place, period), and on conflicting entity
// attributes for the same POI.
Warehouse load_warehouse(std::span<const FlatWeeklyRecord> records, LoadOptions options = {});

// Writers producing files the parsers accept.
void write_flat_weekly(std::ostream& out, std::span<const FlatWeeklyRecord> records);
void write_social_distancing(std::ostream& out, std::span<const SocialDistancingRecord> records);
void save_social_distancing(const std::filesystem::path& path,
                            std::span<const SocialDistancingRecord> records);

}  // namespace mw::ingest
