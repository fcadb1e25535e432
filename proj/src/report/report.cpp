#include "mw/report/report.hpp"

#include <fstream>
#include <sstream>

#include "mw/core/calendar.hpp"
#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"
#include "mw/core/population.hpp"
#include "mw/query/query.hpp"
#include "mw/query/serialize.hpp"

namespace mw::report {
namespace {

using nlohmann::json;
using OJ = nlohmann::ordered_json;

constexpr std::array<std::pair<SectionType, std::string_view>, 6> kTypeNames = {{
    {SectionType::kTopCategories, "top-categories"},
    {SectionType::kHangouts, "hangouts"},
    {SectionType::kCategorySeries, "category-series"},
    {SectionType::kCompliance, "compliance"},
    {SectionType::kSamplingRate, "sampling-rate"},
    {SectionType::kOutbreakCompare, "outbreak-compare"},
}};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  require(it != obj.end(), where + ": missing '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

Date get_date(const json& obj, const char* key, const std::string& where) {
  auto text = get<std::string>(obj, key, where);
  auto date = Date::parse(text);
  require(date.has_value(), where + ": '" + key + "' is not a date: " + text);
  return *date;
}

NaicsCode get_naics(const json& value, const std::string& where) {
  NaicsCode code;
  if (value.is_number_integer()) {
    code.value = value.get<std::int32_t>();
  } else if (value.is_string()) {
    auto parsed = csv::parse_int(value.get<std::string>());
    require(parsed.has_value(), where + ": bad NAICS code");
    code.value = static_cast<std::int32_t>(*parsed);
  } else {
    throw ConfigError(where + ": bad NAICS code");
  }
  require(code.valid(), where + ": NAICS code must have 6 digits");
  return code;
}

std::size_t get_k(const json& obj, const std::string& where) {
  const auto k = get_or<std::int64_t>(obj, "k", 10, where);
  require(k >= 1, where + ": k must be at least 1");
  return static_cast<std::size_t>(k);
}

SectionSpec parse_section(const json& s, std::size_t index, const std::filesystem::path& base) {
  const std::string where = "section " + std::to_string(index + 1);
  require(s.is_object(), where + ": must be an object");
  const auto type_name = get<std::string>(s, "type", where);
  SectionSpec sec;
  auto it = std::find_if(kTypeNames.begin(), kTypeNames.end(),
                         [&](const auto& p) { return p.second == type_name; });
  require(it != kTypeNames.end(), where + ": unknown type '" + type_name + "'");
  sec.type = it->first;

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  switch (sec.type) {
    case SectionType::kTopCategories:
      sec.k = get_k(s, where);
      break;
    case SectionType::kHangouts:
      require(s.contains("naics"), where + ": missing 'naics'");
      sec.naics = get_naics(s["naics"], where);
      sec.k = get_k(s, where);
      if (s.contains("state") && !s["state"].is_null()) sec.state = get<std::string>(s, "state", where);
      break;
    case SectionType::kCategorySeries: {
      const auto cats = get<json>(s, "categories", where);
      require(cats.is_array() && !cats.empty(), where + ": 'categories' must be a nonempty array");
      for (const auto& c : cats) sec.categories.insert(get_naics(c, where));
      const auto filter = get_or<std::string>(s, "dwell_filter", "all", where);
      require(filter == "all" || filter == "long", where + ": dwell_filter must be all or long");
      sec.dwell_filter = filter == "all" ? analytics::DwellFilter::kAll : analytics::DwellFilter::kLongOnly;
      break;
    }
    case SectionType::kCompliance: {
      const auto metric = get_or<std::string>(s, "metric", "time_at_home", where);
      require(metric == "time_at_home" || metric == "distance_from_home",
              where + ": metric must be time_at_home or distance_from_home");
      sec.metric = metric == "time_at_home" ? analytics::ComplianceMetric::kTimeAtHome
                                            : analytics::ComplianceMetric::kDistanceFromHome;
      const auto agg = get_or<std::string>(s, "aggregation", "median_of_medians", where);
      require(agg == "median_of_medians" || agg == "device_weighted_mean",
              where + ": aggregation must be median_of_medians or device_weighted_mean");
      sec.aggregation = agg == "median_of_medians" ? analytics::Aggregation::kMedianOfMedians
                                                   : analytics::Aggregation::kDeviceWeightedMean;
      break;
    }
    case SectionType::kSamplingRate: {
      auto level = parse_region_level(get_or<std::string>(s, "level", "tract", where));
      require(level.has_value(), where + ": unknown level");
      sec.level = *level;
      sec.population = resolve(get<std::string>(s, "population", where));
      break;
    }
    case SectionType::kOutbreakCompare: {
      sec.roster = resolve(get<std::string>(s, "roster", where));
      const auto window = get<json>(s, "baseline_window", where);
      require(window.is_object(), where + ": 'baseline_window' must be an object");
      sec.match.baseline_window = {get_date(window, "start", where), get_date(window, "end", where)};
      sec.baseline_week = get_date(s, "baseline_week", where);
      sec.match.max_distance_meters = get_or<double>(s, "max_distance_meters", sec.match.max_distance_meters, where);
      sec.match.ratio_low = get_or<double>(s, "ratio_low", sec.match.ratio_low, where);
      sec.match.ratio_high = get_or<double>(s, "ratio_high", sec.match.ratio_high, where);
      try {
        sec.match.validate();
      } catch (const ArgumentError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      break;
    }
  }
  return sec;
}

// --- rendering helpers ---

OJ number(double v) { return OJ(csv::parse_double(csv::format_sig6(v)).value_or(v)); }

OJ series_json(const analytics::WeeklySeries& s) {
  OJ points = OJ::array();
  for (const auto& p : s.points) points.push_back(OJ{{"week_start", p.week_start.iso()}, {"value", number(p.value)}});
  OJ annotations = OJ::array();
  for (const auto& a : s.annotations) annotations.push_back(OJ{{"date", a.date.iso()}, {"label", a.label}});
  OJ doc;
  doc["label"] = s.label;
  doc["points"] = std::move(points);
  doc["annotations"] = std::move(annotations);
  return doc;
}

std::string series_headline(const analytics::WeeklySeries& s) {
  if (s.points.empty()) return "no data in range";
  const auto peak = std::max_element(s.points.begin(), s.points.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
  const auto low = std::min_element(s.points.begin(), s.points.end(),
                                    [](const auto& a, const auto& b) { return a.value < b.value; });
  return std::to_string(s.points.size()) + " weeks; first " + csv::format_sig6(s.points.front().value) +
         "; last " + csv::format_sig6(s.points.back().value) + "; peak " + csv::format_sig6(peak->value) +
         " (week of " + peak->week_start.iso() + "); low " + csv::format_sig6(low->value) + " (week of " +
         low->week_start.iso() + ")";
}

struct Rendered {
  std::string extension;  // ".csv" or ".json"
  std::string content;
  std::string summary;    // markdown body for summary.md
};

struct Context {
  const Warehouse& warehouse;
  std::span<const SocialDistancingRecord> sd;
  const ReportSpec& spec;
  const PolicyCalendar& calendar;
  const analytics::NaicsLookup& names;
};

Rendered render_top_categories(const Context& ctx, const SectionSpec& sec) {
  const auto result = query::q2_top_categories(ctx.warehouse, ctx.spec.range, sec.k);
  std::ostringstream md;
  md << "Top " << sec.k << " categories by visits.\n\n";
  if (result.rows.empty()) {
    md << "No visits in range.\n";
  } else {
    md << "| Rank | Code | Category | Visits |\n|---:|---|---|---:|\n";
    std::size_t rank = 0;
    for (const auto& r : result.rows) {
      const auto code = csv::parse_int(r.key).value_or(0);
      md << "| " << ++rank << " | " << r.key << " | " << ctx.names.name(NaicsCode{static_cast<std::int32_t>(code)})
         << " | " << r.value << " |\n";
    }
  }
  return {".csv", query::ranked_to_csv(result, "code", "visits"), md.str()};
}

Rendered render_hangouts(const Context& ctx, const SectionSpec& sec) {
  const auto result = query::q3_top_hangouts(ctx.warehouse, sec.naics, sec.state, ctx.spec.range, sec.k);
  std::ostringstream md;
  md << "Top " << sec.k << " " << ctx.names.name(sec.naics) << " (" << sec.naics.str() << ")"
     << (sec.state ? " in state " + *sec.state : std::string()) << " by visits longer than 20 minutes.\n\n";
  if (result.rows.empty()) {
    md << "No matching places in range.\n";
  } else {
    md << "| Rank | Place | Name | Long visits |\n|---:|---|---|---:|\n";
    std::size_t rank = 0;
    for (const auto& r : result.rows) {
      const PoiRow* poi = ctx.warehouse.find_poi(r.key);
      md << "| " << ++rank << " | " << r.key << " | " << (poi ? poi->location_name : "") << " | " << r.value
         << " |\n";
    }
  }
  return {".csv", query::ranked_to_csv(result, "place_id", "long_visits"), md.str()};
}

Rendered render_category_series(const Context& ctx, const SectionSpec& sec) {
  const auto series = analytics::weekly_category_series(ctx.warehouse, sec.categories, sec.dwell_filter, ctx.spec.range);
  OJ list = OJ::array();
  std::ostringstream md;
  md << "Weekly " << (sec.dwell_filter == analytics::DwellFilter::kAll ? "visits" : "long-duration visits")
     << " per category.\n\n";
  for (const auto& s : series) {
    const auto annotated = analytics::annotate_with_calendar(s, ctx.calendar);
    list.push_back(series_json(annotated));
    const auto code = csv::parse_int(s.label).value_or(0);
    md << "- " << s.label << " " << ctx.names.name(NaicsCode{static_cast<std::int32_t>(code)}) << ": "
       << series_headline(s) << "\n";
  }
  OJ doc;
  doc["series"] = std::move(list);
  return {".json", doc.dump(2) + "\n", md.str()};
}

Rendered render_compliance(const Context& ctx, const SectionSpec& sec) {
  const auto series = analytics::annotate_with_calendar(
      analytics::compliance_series(ctx.sd, sec.metric, sec.aggregation, ctx.spec.range), ctx.calendar);
  OJ doc;
  doc["series"] = OJ::array({series_json(series)});
  std::ostringstream md;
  md << "Weekly " << series.label << " over " << ctx.sd.size() << " daily CBG records.\n\n- "
     << series_headline(series) << "\n";
  return {".json", doc.dump(2) + "\n", md.str()};
}

Rendered render_sampling_rate(const Context& ctx, const SectionSpec& sec) {
  const auto population = PopulationTable::load_csv(sec.population);
  const auto rates = analytics::sampling_rate(ctx.sd, population, sec.level, ctx.spec.range);
  const std::set<std::string> flagged(rates.flagged.begin(), rates.flagged.end());
  std::map<std::string, std::string> rows;
  for (const auto& [region, rate] : rates.rates) rows[region] = csv::format_sig6(rate);
  for (const auto& region : rates.omitted) rows[region] = "";

  std::ostringstream out;
  csv::write_row(out, {"region_id", "rate", "status"});
  for (const auto& [region, rate] : rows) {
    const char* status = rate.empty() ? "omitted" : (flagged.contains(region) ? "flagged" : "ok");
    csv::write_row(out, {region, rate, status});
  }
  std::ostringstream md;
  md << "Sampling rate at " << to_string(sec.level) << " level: " << rates.rates.size() << " regions, "
     << rates.omitted.size() << " omitted, " << rates.flagged.size() << " above 1.\n\n";
  if (!rates.rates.empty()) {
    const auto [lo, hi] = std::minmax_element(rates.rates.begin(), rates.rates.end(),
                                              [](const auto& a, const auto& b) { return a.second < b.second; });
    md << "- lowest " << lo->first << ": " << csv::format_sig6(lo->second) << "\n- highest " << hi->first << ": "
       << csv::format_sig6(hi->second) << "\n";
  }
  return {".csv", out.str(), md.str()};
}

Rendered render_outbreak_compare(const Context& ctx, const SectionSpec& sec) {
  const auto roster = analytics::load_outbreak_roster(sec.roster);
  std::vector<std::string> outbreak;
  for (const auto& e : roster) outbreak.push_back(e.place_id);
  std::vector<std::string> candidates;
  for (const auto& [id, poi] : ctx.warehouse.pois()) candidates.push_back(id);
  const auto match = analytics::match_controls(ctx.warehouse, outbreak, candidates, sec.match);
  if (match.pairs.empty()) throw ArgumentError("no outbreak POI could be matched to a control");
  const auto trend = analytics::outbreak_trend_compare(ctx.warehouse, match.pairs, sec.baseline_week, ctx.spec.range);
  const auto out_series = analytics::annotate_with_calendar(trend.outbreak, ctx.calendar);
  const auto ctl_series = analytics::annotate_with_calendar(trend.control, ctx.calendar);

  OJ pairs = OJ::array();
  for (const auto& p : match.pairs) {
    pairs.push_back(OJ{{"outbreak_poi", p.outbreak_poi},
                       {"control_poi", p.control_poi},
                       {"distance_meters", number(p.distance_meters)},
                       {"baseline_visit_ratio", number(p.baseline_visit_ratio)}});
  }
  OJ doc;
  doc["series"] = OJ::array({series_json(out_series), series_json(ctl_series)});
  doc["pairs"] = std::move(pairs);
  doc["unmatched"] = match.unmatched;

  std::ostringstream md;
  md << match.pairs.size() << " matched pairs, " << match.unmatched.size()
     << " unmatched outbreak POIs. Long-duration visits relative to the week of " << sec.baseline_week.iso()
     << ".\n\n- outbreak: " << series_headline(out_series) << "\n- control: " << series_headline(ctl_series)
     << "\n";
  return {".json", doc.dump(2) + "\n", md.str()};
}

Rendered render_section(const Context& ctx, const SectionSpec& sec) {
  switch (sec.type) {
    case SectionType::kTopCategories: return render_top_categories(ctx, sec);
    case SectionType::kHangouts: return render_hangouts(ctx, sec);
    case SectionType::kCategorySeries: return render_category_series(ctx, sec);
    case SectionType::kCompliance: return render_compliance(ctx, sec);
    case SectionType::kSamplingRate: return render_sampling_rate(ctx, sec);
    case SectionType::kOutbreakCompare: return render_outbreak_compare(ctx, sec);
  }
  throw ArgumentError("unknown section type");
}

std::string title_of(SectionType type) {
  switch (type) {
    case SectionType::kTopCategories: return "Top categories";
    case SectionType::kHangouts: return "Hangout places";
    case SectionType::kCategorySeries: return "Category series";
    case SectionType::kCompliance: return "Stay-at-home compliance";
    case SectionType::kSamplingRate: return "Sampling rate";
    case SectionType::kOutbreakCompare: return "Outbreak comparison";
  }
  return "Section";
}

}  // namespace

std::string_view to_string(SectionType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "unknown";
}

ReportSpec ReportSpec::from_json(const json& doc, const std::filesystem::path& base_dir) {
  require(doc.is_object(), "report spec must be a JSON object");
  ReportSpec spec;
  spec.title = get<std::string>(doc, "title", "report spec");
  spec.range = {get_date(doc, "start", "report spec"), get_date(doc, "end", "report spec")};
  require(spec.range.well_ordered(), "report spec: start is after end");
  if (doc.contains("calendar") && !doc["calendar"].is_null()) {
    std::filesystem::path p(get<std::string>(doc, "calendar", "report spec"));
    spec.calendar = p.is_absolute() ? p : base_dir / p;
  }
  const auto sections = get<json>(doc, "sections", "report spec");
  require(sections.is_array() && !sections.empty(), "report spec: 'sections' must be a nonempty array");
  for (std::size_t i = 0; i < sections.size(); ++i) spec.sections.push_back(parse_section(sections[i], i, base_dir));
  return spec;
}

ReportSpec ReportSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report spec " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

ReportBundle render_report(const Warehouse& warehouse, std::span<const SocialDistancingRecord> sd_records,
                           const ReportSpec& spec) {
  if (spec.sections.empty()) throw ArgumentError("report needs at least one section");
  if (!spec.range.well_ordered()) throw ArgumentError("report start is after end");
  const PolicyCalendar calendar = spec.calendar ? PolicyCalendar::load_csv(*spec.calendar) : PolicyCalendar::minnesota();
  const auto names = analytics::NaicsLookup::bundled();
  const Context ctx{warehouse, sd_records, spec, calendar, names};

  ReportBundle bundle;
  std::map<SectionType, int> seen;
  std::ostringstream md;
  md << "# " << spec.title << "\n\nPeriod: " << spec.range.start.iso() << " to " << spec.range.end.iso() << "\n\n";
  md << "## Policy calendar\n\n";
  const auto events = calendar.within(spec.range.start, spec.range.end);
  if (events.empty()) md << "No policy events in range.\n";
  for (const auto& e : events) md << "- " << e.date.iso() << ": " << e.label << "\n";

  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    const auto& sec = spec.sections[i];
    const std::string ctx_name =
        "section " + std::to_string(i + 1) + " (" + std::string(to_string(sec.type)) + "): ";
    Rendered r;
    try {
      r = render_section(ctx, sec);
    } catch (const IoError& e) {
      throw IoError(ctx_name + e.what());
    } catch (const FormatError& e) {
      throw FormatError(ctx_name + e.what());
    } catch (const Error& e) {
      throw ArgumentError(ctx_name + e.what());
    }
    std::string stem(to_string(sec.type));
    std::replace(stem.begin(), stem.end(), '-', '_');
    if (const int n = ++seen[sec.type]; n > 1) stem += "_" + std::to_string(n);
    const std::string file = stem + r.extension;
    bundle[file] = std::move(r.content);
    md << "\n## " << i + 1 << ". " << title_of(sec.type) << "\n\nArtifact: `" << file << "`\n\n" << r.summary;
  }
  bundle["summary.md"] = md.str();
  return bundle;
}

void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw PersistenceError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : bundle) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw PersistenceError("cannot write " + (dir / name).string());
  }
}

}  // namespace mw::report
