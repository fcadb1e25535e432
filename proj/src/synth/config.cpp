#include <algorithm>
#include <cmath>
#include <set>
#include <fstream>
#include <regex>

#include "mw/core/error.hpp"
#include "mw/synth/synth.hpp"

namespace mw::synth {
namespace {

using nlohmann::json;

constexpr double kMaxMultiplier = 1000.0;
constexpr std::int64_t kMaxBaseVisits = 1'000'000;

Date d(int y, unsigned m, unsigned day) { return Date::from_ymd(y, m, day); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_multiplier(double m, const std::string& where) {
  require(std::isfinite(m) && m >= 0.0 && m <= kMaxMultiplier,
          where + ": multiplier must be in [0, 1000]");
}

constexpr NaicsCode kFullService{722511};
constexpr NaicsCode kLimitedService{722513};
constexpr NaicsCode kBars{722410};
constexpr NaicsCode kGrocery{445110};
constexpr NaicsCode kSchools{611110};

Phase phase(std::string name, Date start, Date end, std::array<double, 5> m) {
  return {std::move(name), {start, end},
          {{kFullService, m[0]}, {kLimitedService, m[1]}, {kBars, m[2]}, {kGrocery, m[3]}, {kSchools, m[4]}}};
}

// --- JSON helpers ---

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

DateRange get_range(const json& obj, const std::string& where) {
  return {get_date(obj, "start", where), get_date(obj, "end", where)};
}

NaicsCode parse_naics(const std::string& text, const std::string& where) {
  std::int32_t value = 0;
  try {
    std::size_t used = 0;
    value = std::stoi(text, &used);
    require(used == text.size(), where + ": bad NAICS code '" + text + "'");
  } catch (const std::logic_error&) {
    throw ConfigError(where + ": bad NAICS code '" + text + "'");
  }
  return NaicsCode{value};
}

// Accepts 722511 or "722511".
NaicsCode naics_field(const json& obj, const std::string& where) {
  require(obj.contains("naics"), where + ": missing 'naics'");
  const auto& v = obj["naics"];
  if (v.is_string()) return parse_naics(v.get<std::string>(), where);
  require(v.is_number_integer(), where + ": 'naics' has the wrong type");
  return NaicsCode{v.get<std::int32_t>()};
}

}  // namespace

std::vector<Phase> default_phases() {
  return {
      phase("stay-at-home", d(2020, 3, 27), d(2020, 5, 17), {0.15, 0.5, 0.2, 0.9, 0.05}),
      phase("phase-1", d(2020, 5, 18), d(2020, 5, 31), {0.4, 0.6, 0.4, 0.95, 0.05}),
      phase("phase-2", d(2020, 6, 1), d(2020, 6, 9), {0.6, 0.7, 0.6, 0.95, 0.05}),
      phase("phase-3", d(2020, 6, 10), d(2020, 11, 15), {0.8, 0.85, 0.8, 0.95, 0.4}),
      phase("shutdown", d(2020, 11, 16), d(2021, 1, 10), {0.3, 0.6, 0.3, 0.95, 0.3}),
      phase("reopening", d(2021, 1, 11), d(2021, 5, 26), {0.7, 0.8, 0.7, 0.95, 0.7}),
      phase("no-limits", d(2021, 5, 27), d(2030, 12, 31), {0.9, 0.95, 0.9, 1.0, 0.8}),
  };
}

HomeDwellProfile default_home_dwell() {
  HomeDwellProfile p;
  p.baseline_minutes = 600;
  p.daily_noise_minutes = 30;
  p.periods = {
      {{d(2020, 3, 16), d(2020, 3, 26)}, 690},
      {{d(2020, 3, 27), d(2020, 4, 5)}, 780},
      {{d(2020, 4, 6), d(2020, 4, 12)}, 840},
      {{d(2020, 4, 13), d(2020, 5, 17)}, 760},
      {{d(2020, 5, 18), d(2020, 6, 9)}, 700},
      {{d(2020, 6, 10), d(2020, 11, 15)}, 650},
      {{d(2020, 11, 16), d(2021, 1, 10)}, 690},
  };
  return p;
}

void SynthConfig::validate() const {
  require(state.size() == 2 && is_digits(state), "state must be a 2-digit FIPS code");
  require(n_cbgs >= 1 && n_cbgs <= 900'000, "n_cbgs must be in [1, 900000]");
  require(n_counties >= 1 && n_counties <= 500 && n_counties <= n_cbgs,
          "n_counties must be in [1, min(500, n_cbgs)]");
  require(weeks.well_ordered(), "weeks: start is after end");
  require(devices_per_cbg >= 0, "devices_per_cbg must be >= 0");
  require(!devices_total || *devices_total >= 0, "devices_total must be >= 0");

  std::set<NaicsCode> seen;
  for (const auto& c : categories) {
    const std::string where = "category " + c.naics.str();
    require(c.naics.valid(), where + ": NAICS code must have 6 digits");
    require(seen.insert(c.naics).second, where + ": listed twice");
    require(c.n_pois >= 0 && c.n_pois <= 1'000'000, where + ": n_pois must be in [0, 1000000]");
    require(c.base_weekly_visits >= 0 && c.base_weekly_visits <= kMaxBaseVisits,
            where + ": base_weekly_visits must be in [0, 1000000]");
    double sum = 0.0;
    for (double p : c.dwell_mix) {
      require(std::isfinite(p) && p >= 0.0 && p <= 1.0, where + ": dwell_mix entries must be in [0, 1]");
      sum += p;
    }
    require(std::fabs(sum - 1.0) <= 1e-9, where + ": dwell_mix must sum to 1");
  }
  for (const auto& p : phases) {
    require(p.range.well_ordered(), "phase " + p.name + ": start is after end");
    for (const auto& [naics, m] : p.multipliers) check_multiplier(m, "phase " + p.name);
  }
  for (const auto& h : home_dwell.periods) {
    require(h.range.well_ordered(), "home_dwell period: start is after end");
    require(h.minutes >= 0 && h.minutes <= 1440, "home_dwell minutes must be in [0, 1440]");
  }
  require(home_dwell.baseline_minutes >= 0 && home_dwell.baseline_minutes <= 1440,
          "home_dwell baseline must be in [0, 1440]");
  require(home_dwell.daily_noise_minutes >= 0 && home_dwell.daily_noise_minutes <= 240,
          "home_dwell noise must be in [0, 240]");

  require(std::isfinite(population.target_rate) && population.target_rate > 0.0,
          "population target_rate must be > 0");
  for (const auto& [region, rate] : population.target_rates) {
    require(region.size() == region_id_length(population.level) && is_digits(region),
            "population target_rates: bad region id '" + region + "'");
    require(std::isfinite(rate) && rate > 0.0, "population target_rates: rate must be > 0");
  }
  for (const auto& [region, count] : population.counts) {
    require(region.size() == region_id_length(population.level) && is_digits(region),
            "population counts: bad region id '" + region + "'");
    require(count >= 0, "population counts must be >= 0");
  }

  if (outbreak) {
    const auto& o = *outbreak;
    auto it = std::find_if(categories.begin(), categories.end(),
                           [&](const CategoryConfig& c) { return c.naics == o.naics; });
    require(it != categories.end(), "outbreak: category " + o.naics.str() + " is not configured");
    require(o.count >= 0 && o.count <= it->n_pois, "outbreak: count exceeds the category's POIs");
    check_multiplier(o.recovery_multiplier, "outbreak");
    check_multiplier(o.control_recovery_multiplier, "outbreak");
    static const std::regex kMonth(R"(\d{4}-(0[1-9]|1[0-2]))");
    require(std::regex_match(o.month_linked, kMonth), "outbreak: month_linked must be YYYY-MM");
  }
  try {
    PolicyCalendar{calendar};
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("calendar: ") + e.what());
  }
}

SynthConfig preset(const std::string& name) {
  SynthConfig c;
  c.weeks = {d(2020, 3, 2), d(2021, 7, 4)};
  c.phases = default_phases();
  c.home_dwell = default_home_dwell();
  c.population.level = RegionLevel::kState;
  c.population.target_rate = 0.05;
  if (name == "desk") {
    c.seed = 20200327;
    c.n_cbgs = 10;
    c.n_counties = 3;
    c.devices_per_cbg = 100;
    c.categories = {
        {kFullService, 4, 120, {0.10, 0.25, 0.40, 0.20, 0.05}},
        {kLimitedService, 3, 150, {0.30, 0.40, 0.20, 0.08, 0.02}},
        {kBars, 3, 80, {0.05, 0.20, 0.40, 0.30, 0.05}},
        {kGrocery, 2, 300, {0.25, 0.45, 0.25, 0.04, 0.01}},
        {kSchools, 2, 200, {0.05, 0.10, 0.15, 0.30, 0.40}},
    };
    c.outbreak = OutbreakConfig{kFullService, 1, 1.0, 0.5, d(2021, 1, 11), "2020-11"};
    return c;
  }
  if (name == "mn-scale") {
    c.seed = 73548;
    c.n_cbgs = 4107;
    c.n_counties = 87;
    c.devices_total = 294014;
    const std::array<std::pair<NaicsCode, std::array<double, 5>>, 10> mix = {{
        {kFullService, {0.10, 0.25, 0.40, 0.20, 0.05}},
        {kLimitedService, {0.30, 0.40, 0.20, 0.08, 0.02}},
        {kBars, {0.05, 0.20, 0.40, 0.30, 0.05}},
        {kGrocery, {0.25, 0.45, 0.25, 0.04, 0.01}},
        {kSchools, {0.05, 0.10, 0.15, 0.30, 0.40}},
        {NaicsCode{447110}, {0.60, 0.30, 0.07, 0.02, 0.01}},
        {NaicsCode{452319}, {0.20, 0.45, 0.25, 0.08, 0.02}},
        {NaicsCode{712190}, {0.05, 0.15, 0.40, 0.35, 0.05}},
        {NaicsCode{531120}, {0.10, 0.20, 0.20, 0.30, 0.20}},
        {NaicsCode{713940}, {0.05, 0.15, 0.50, 0.28, 0.02}},
    }};
    // 73,548 POIs over ten categories.
    for (std::size_t i = 0; i < mix.size(); ++i) {
      c.categories.push_back({mix[i].first, i < 8 ? 7355 : 7354, 30, mix[i].second});
    }
    c.outbreak = OutbreakConfig{kFullService, 50, 1.0, 0.5, d(2021, 1, 11), "2020-11"};
    return c;
  }
  throw ArgumentError("unknown preset '" + name + "' (expected desk or mn-scale)");
}

SynthConfig config_from_json(const json& doc) {
  require(doc.is_object(), "config must be a JSON object");
  const std::string top = "config";
  SynthConfig c;
  c.seed = get<std::uint64_t>(doc, "seed", top);
  c.state = get_or<std::string>(doc, "state", c.state, top);
  c.n_cbgs = get<std::int32_t>(doc, "n_cbgs", top);
  c.n_counties = get_or<std::int32_t>(doc, "n_counties", 1, top);
  require(doc.contains("weeks") && doc["weeks"].is_object(), "config: missing 'weeks' object");
  c.weeks = get_range(doc["weeks"], "weeks");

  for (const auto& cat : get<json>(doc, "categories", top)) {
    require(cat.is_object(), "categories: entries must be objects");
    CategoryConfig cc;
    cc.naics = naics_field(cat, "category");
    const std::string where = "category " + cc.naics.str();
    cc.n_pois = get<std::int32_t>(cat, "n_pois", where);
    cc.base_weekly_visits = get<std::int64_t>(cat, "base_weekly_visits", where);
    auto mix = get<std::vector<double>>(cat, "dwell_mix", where);
    require(mix.size() == 5, where + ": dwell_mix needs 5 probabilities");
    std::copy(mix.begin(), mix.end(), cc.dwell_mix.begin());
    c.categories.push_back(cc);
  }

  if (doc.contains("phases")) {
    for (const auto& p : doc["phases"]) {
      require(p.is_object(), "phases: entries must be objects");
      Phase ph;
      ph.name = get_or<std::string>(p, "name", "", "phase");
      ph.range = get_range(p, "phase " + ph.name);
      const auto multipliers = get<json>(p, "multipliers", "phase " + ph.name);
      for (const auto& [key, m] : multipliers.items()) {
        require(m.is_number(), "phase " + ph.name + ": multiplier for " + key + " must be a number");
        ph.multipliers[parse_naics(key, "phase " + ph.name)] = m.get<double>();
      }
      c.phases.push_back(std::move(ph));
    }
  } else {
    c.phases = default_phases();
  }

  if (doc.contains("home_dwell")) {
    const auto& h = doc["home_dwell"];
    require(h.is_object(), "home_dwell must be an object");
    c.home_dwell.baseline_minutes = get_or<std::int32_t>(h, "baseline_minutes", 600, "home_dwell");
    c.home_dwell.daily_noise_minutes = get_or<std::int32_t>(h, "daily_noise_minutes", 30, "home_dwell");
    c.home_dwell.periods.clear();
    for (const auto& p : get_or<json>(h, "periods", json::array(), "home_dwell")) {
      c.home_dwell.periods.push_back({get_range(p, "home_dwell period"),
                                      get<std::int32_t>(p, "minutes", "home_dwell period")});
    }
  } else {
    c.home_dwell = default_home_dwell();
  }

  if (doc.contains("devices")) {
    const auto& dv = doc["devices"];
    require(dv.is_object(), "devices must be an object");
    c.devices_per_cbg = get_or<std::int64_t>(dv, "per_cbg", 100, "devices");
    if (dv.contains("total")) c.devices_total = get<std::int64_t>(dv, "total", "devices");
  }

  if (doc.contains("population")) {
    const auto& p = doc["population"];
    require(p.is_object(), "population must be an object");
    auto level = parse_region_level(get_or<std::string>(p, "level", "state", "population"));
    require(level.has_value(), "population: unknown level");
    c.population.level = *level;
    c.population.target_rate = get_or<double>(p, "target_rate", 0.05, "population");
    c.population.target_rates =
        get_or<std::map<std::string, double>>(p, "target_rates", {}, "population");
    c.population.counts = get_or<std::map<std::string, std::int64_t>>(p, "counts", {}, "population");
  }

  if (doc.contains("outbreak") && !doc["outbreak"].is_null()) {
    const auto& o = doc["outbreak"];
    require(o.is_object(), "outbreak must be an object");
    OutbreakConfig oc;
    oc.naics = naics_field(o, "outbreak");
    oc.count = get<std::int32_t>(o, "count", "outbreak");
    oc.recovery_multiplier = get<double>(o, "recovery_multiplier", "outbreak");
    oc.control_recovery_multiplier = get<double>(o, "control_recovery_multiplier", "outbreak");
    oc.recovery_start = get_date(o, "recovery_start", "outbreak");
    oc.month_linked = get<std::string>(o, "month_linked", "outbreak");
    c.outbreak = oc;
  }

  if (doc.contains("calendar")) {
    for (const auto& e : doc["calendar"]) {
      c.calendar.push_back({get_date(e, "date", "calendar"), get<std::string>(e, "label", "calendar")});
    }
  }
  c.validate();
  return c;
}

nlohmann::ordered_json config_to_json(const SynthConfig& c) {
  using OJ = nlohmann::ordered_json;
  OJ doc;
  doc["seed"] = c.seed;
  doc["state"] = c.state;
  doc["n_cbgs"] = c.n_cbgs;
  doc["n_counties"] = c.n_counties;
  doc["weeks"] = OJ{{"start", c.weeks.start.iso()}, {"end", c.weeks.end.iso()}};
  doc["categories"] = OJ::array();
  for (const auto& cat : c.categories) {
    OJ o;
    o["naics"] = cat.naics.value;
    o["n_pois"] = cat.n_pois;
    o["base_weekly_visits"] = cat.base_weekly_visits;
    o["dwell_mix"] = cat.dwell_mix;
    doc["categories"].push_back(std::move(o));
  }
  doc["phases"] = OJ::array();
  for (const auto& p : c.phases) {
    OJ o;
    o["name"] = p.name;
    o["start"] = p.range.start.iso();
    o["end"] = p.range.end.iso();
    o["multipliers"] = OJ::object();
    for (const auto& [naics, m] : p.multipliers) o["multipliers"][naics.str()] = m;
    doc["phases"].push_back(std::move(o));
  }
  OJ home;
  home["baseline_minutes"] = c.home_dwell.baseline_minutes;
  home["daily_noise_minutes"] = c.home_dwell.daily_noise_minutes;
  home["periods"] = OJ::array();
  for (const auto& h : c.home_dwell.periods) {
    home["periods"].push_back(
        OJ{{"start", h.range.start.iso()}, {"end", h.range.end.iso()}, {"minutes", h.minutes}});
  }
  doc["home_dwell"] = std::move(home);
  OJ devices;
  devices["per_cbg"] = c.devices_per_cbg;
  if (c.devices_total) devices["total"] = *c.devices_total;
  doc["devices"] = std::move(devices);
  OJ pop;
  pop["level"] = std::string(to_string(c.population.level));
  pop["target_rate"] = c.population.target_rate;
  pop["target_rates"] = OJ::object();
  for (const auto& [k, v] : c.population.target_rates) pop["target_rates"][k] = v;
  pop["counts"] = OJ::object();
  for (const auto& [k, v] : c.population.counts) pop["counts"][k] = v;
  doc["population"] = std::move(pop);
  if (c.outbreak) {
    const auto& o = *c.outbreak;
    doc["outbreak"] = OJ{{"naics", o.naics.value},
                         {"count", o.count},
                         {"recovery_multiplier", o.recovery_multiplier},
                         {"control_recovery_multiplier", o.control_recovery_multiplier},
                         {"recovery_start", o.recovery_start.iso()},
                         {"month_linked", o.month_linked}};
  }
  if (!c.calendar.empty()) {
    doc["calendar"] = OJ::array();
    for (const auto& e : c.calendar) doc["calendar"].push_back(OJ{{"date", e.date.iso()}, {"label", e.label}});
  }
  return doc;
}

SynthConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

double phase_multiplier(const SynthConfig& config, NaicsCode naics, Date week_start) {
  for (const auto& p : config.phases) {
    if (!p.range.contains(week_start)) continue;
    auto it = p.multipliers.find(naics);
    return it == p.multipliers.end() ? 1.0 : it->second;
  }
  return 1.0;
}

}  // namespace mw::synth
