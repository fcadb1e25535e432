#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mw/analytics/analytics.hpp"
#include "mw/core/date.hpp"
#include "mw/core/geo.hpp"
#include "mw/core/records.hpp"
#include "mw/core/warehouse.hpp"

namespace mw::report {

enum class SectionType {
  kTopCategories,
  kHangouts,
  kCategorySeries,
  kCompliance,
  kSamplingRate,
  kOutbreakCompare,
};

// "top-categories", "hangouts", ...
std::string_view to_string(SectionType type);

struct SectionSpec {
  SectionType type = SectionType::kTopCategories;
  std::size_t k = 10;                                   // top-categories, hangouts
  NaicsCode naics;                                      // hangouts
  std::optional<std::string> state;                     // hangouts
  std::set<NaicsCode> categories;                       // category-series
  analytics::DwellFilter dwell_filter = analytics::DwellFilter::kAll;
  analytics::ComplianceMetric metric = analytics::ComplianceMetric::kTimeAtHome;
  analytics::Aggregation aggregation = analytics::Aggregation::kMedianOfMedians;
  RegionLevel level = RegionLevel::kState;              // sampling-rate
  std::filesystem::path population;                     // sampling-rate
  std::filesystem::path roster;                         // outbreak-compare
  analytics::MatchParams match;                         // outbreak-compare
  Date baseline_week;                                   // outbreak-compare
};

struct ReportSpec {
  std::string title;
  DateRange range;
  std::optional<std::filesystem::path> calendar;  // default: Minnesota calendar
  std::vector<SectionSpec> sections;

  // Relative paths resolve against base_dir. Throws ConfigError on a
  // malformed document, no sections, or start after end.
  static ReportSpec from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static ReportSpec load(const std::filesystem::path& path);
};

// Artifact name -> file bytes. Always contains summary.md plus one artifact
// per section, named after the section type (".csv" for tables, ".json" for
// series), with "_2", "_3", ... for repeated types.
using ReportBundle = std::map<std::string, std::string>;

// Throws with the failing section named; nothing is produced on failure.
ReportBundle render_report(const Warehouse& warehouse,
                           std::span<const SocialDistancingRecord> sd_records,
                           const ReportSpec& spec);

// Writes the bundle into dir (created if needed).
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace mw::report
