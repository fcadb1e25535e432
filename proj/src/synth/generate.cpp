#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mw/core/error.hpp"
#include "mw/ingest/ingest.hpp"
#include "mw/synth/synth.hpp"

namespace mw::synth {
namespace {

constexpr std::int64_t kMicro = 1'000'000;
constexpr std::int32_t kCellMicroDegrees = 10'000;  // 0.01 degree grid cells
constexpr std::int64_t kGridLatMicro = 44'900'000;
constexpr std::int64_t kGridLonMicro = -93'400'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Integer-only draws on a mt19937_64 stream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = 0;
    do x = engine_(); while (x >= limit);
    return x % n;
  }

  // Binomial(trials, 1/2).
  std::int64_t coin_flips(std::int64_t trials) {
    std::int64_t heads = 0;
    for (; trials >= 64; trials -= 64) heads += std::popcount(engine_());
    if (trials > 0) heads += std::popcount(engine_() & ((std::uint64_t{1} << trials) - 1));
    return heads;
  }

  // Integer count with mean lambda_micro / 1e6: Binomial(2 floor(lambda), 1/2)
  // plus a Bernoulli draw for the fractional part.
  std::int64_t count(std::int64_t lambda_micro) {
    const std::int64_t whole = lambda_micro / kMicro;
    const std::int64_t frac = lambda_micro % kMicro;
    std::int64_t n = coin_flips(2 * whole);
    if (frac > 0 && static_cast<std::int64_t>(below(kMicro)) < frac) ++n;
    return n;
  }

 private:
  std::mt19937_64 engine_;
};

std::int64_t to_micro(double value) { return std::llround(value * static_cast<double>(kMicro)); }

// Cumulative integer weights out of 1e6; the last bucket absorbs rounding.
std::array<std::int64_t, 5> cumulative_weights(const std::array<double, 5>& mix) {
  std::array<std::int64_t, 5> cum{};
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    acc = std::min(kMicro, acc + to_micro(mix[i]));
    cum[i] = acc;
  }
  cum[4] = kMicro;
  return cum;
}

// Representative minutes for each bucket, used for median_dwell.
constexpr std::array<double, 5> kBucketMinutes = {3, 12, 40, 120, 300};

struct Cbg {
  std::string id;
  std::int64_t lat_micro = 0;
  std::int64_t lon_micro = 0;
  std::int64_t devices = 0;
};

std::vector<Cbg> make_cbgs(const SynthConfig& c) {
  std::vector<Cbg> cbgs;
  const auto cols = static_cast<std::int32_t>(std::ceil(std::sqrt(static_cast<double>(c.n_cbgs))));
  for (std::int32_t i = 0; i < c.n_cbgs; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%s%03d%06d1", c.state.c_str(), 2 * (i % c.n_counties) + 1, 100 + i);
    Cbg cbg;
    cbg.id = id;
    cbg.lat_micro = kGridLatMicro + static_cast<std::int64_t>(i / cols) * kCellMicroDegrees;
    cbg.lon_micro = kGridLonMicro + static_cast<std::int64_t>(i % cols) * kCellMicroDegrees;
    cbg.devices = c.devices_per_cbg;
    if (c.devices_total) {
      const std::int64_t n = c.n_cbgs;
      cbg.devices = *c.devices_total / n + (i < *c.devices_total % n ? 1 : 0);
    }
    cbgs.push_back(std::move(cbg));
  }
  return cbgs;
}

std::vector<Date> week_starts(const DateRange& weeks) {
  std::vector<Date> out;
  for (Date w = weeks.start; w + (kPeriodDays - 1) <= weeks.end; w = w + kPeriodDays) out.push_back(w);
  return out;
}

// Per-POI size factors in per-mille, spread over [600, 1400] with mean 1000.
std::vector<std::int64_t> size_factors(std::int32_t n, Rng& rng) {
  std::vector<std::int64_t> f(static_cast<std::size_t>(n), 1000);
  if (n > 1) {
    for (std::int32_t i = 0; i < n; ++i) {
      // Truncation toward zero keeps the spread symmetric around 1000.
      f[static_cast<std::size_t>(i)] = 1000 + (800 * (2 * i - (n - 1))) / (2 * (n - 1));
    }
  }
  for (std::size_t i = f.size(); i > 1; --i) std::swap(f[i - 1], f[rng.below(i)]);
  return f;
}

std::string short_name(NaicsCode naics) {
  switch (naics.value) {
    case 722511: return "Bistro";
    case 722513: return "Quick Eats";
    case 722410: return "Tavern";
    case 445110: return "Market";
    case 611110: return "School";
    default: return "Place";
  }
}

std::vector<FlatWeeklyRecord> make_weekly(const SynthConfig& c, const std::vector<Cbg>& cbgs,
                                          std::vector<analytics::RosterEntry>& roster) {
  const auto weeks = week_starts(c.weeks);
  std::vector<FlatWeeklyRecord> out;

  for (const auto& cat : c.categories) {
    Rng rng(c.seed, static_cast<std::uint64_t>(cat.naics.value));
    const auto sizes = size_factors(cat.n_pois, rng);
    const auto weights = cumulative_weights(cat.dwell_mix);
    const bool has_outbreak = c.outbreak && c.outbreak->naics == cat.naics;

    std::set<std::int32_t> outbreak_idx;
    if (has_outbreak) {
      // Every other POI while possible.
      const std::int32_t stride = 2 * c.outbreak->count <= cat.n_pois ? 2 : 1;
      for (std::int32_t k = 0; k < c.outbreak->count; ++k) outbreak_idx.insert(k * stride);
    }

    std::vector<std::int64_t> mult_micro;
    for (Date w : weeks) mult_micro.push_back(to_micro(phase_multiplier(c, cat.naics, w)));

    for (std::int32_t j = 0; j < cat.n_pois; ++j) {
      char id[32];
      std::snprintf(id, sizeof id, "poi-%06d-%05d", cat.naics.value, j + 1);
      const std::size_t home = rng.below(cbgs.size());
      const Cbg& cbg = cbgs[home];
      const auto lat = cbg.lat_micro + static_cast<std::int64_t>(rng.below(kCellMicroDegrees));
      const auto lon = cbg.lon_micro + static_cast<std::int64_t>(rng.below(kCellMicroDegrees));
      const bool is_outbreak = outbreak_idx.contains(j);
      if (is_outbreak) roster.push_back({id, c.outbreak->month_linked});

      FlatWeeklyRecord base;
      base.place_id = id;
      base.location_name = short_name(cat.naics) + " " + std::to_string(j + 1);
      if (cat.naics.value == 722513 && j % 2 == 0) base.brand = "Quick Eats Co";
      base.naics = cat.naics;
      base.poi_cbg = cbg.id;
      base.latitude = static_cast<double>(lat) / static_cast<double>(kMicro);
      base.longitude = static_cast<double>(lon) / static_cast<double>(kMicro);
      const std::array<std::string, 3> origins = {cbg.id, cbgs[(home + 1) % cbgs.size()].id,
                                                  cbgs[(home + 2) % cbgs.size()].id};

      for (std::size_t wi = 0; wi < weeks.size(); ++wi) {
        std::int64_t m = mult_micro[wi];
        if (has_outbreak && weeks[wi] >= c.outbreak->recovery_start) {
          m = to_micro(is_outbreak ? c.outbreak->recovery_multiplier
                                   : c.outbreak->control_recovery_multiplier);
        }
        const std::int64_t lambda = cat.base_weekly_visits * m * sizes[static_cast<std::size_t>(j)] / 1000;
        const std::int64_t visits = rng.count(lambda);

        FlatWeeklyRecord r = base;
        r.period_start = weeks[wi];
        r.period_end = weeks[wi] + kPeriodDays;
        r.raw_visit_counts = visits;
        std::array<std::int64_t, 5> buckets{};
        std::array<std::int64_t, 3> origin_counts{};
        for (std::int64_t v = 0; v < visits; ++v) {
          const auto u = static_cast<std::int64_t>(rng.below(kMicro));
          std::size_t b = 0;
          while (u >= weights[b]) ++b;
          ++buckets[b];
          ++r.visits_by_day[rng.below(7)];
          if (rng.below(10) < 7) {
            ++r.raw_visitor_counts;
            const auto o = rng.below(10);
            ++origin_counts[o < 6 ? 0 : (o < 8 ? 1 : 2)];
          }
        }
        for (std::size_t b = 0; b < buckets.size(); ++b) {
          r.bucketed_dwell_times[std::string(label(kAllDwellBuckets[b]))] = buckets[b];
        }
        for (std::size_t o = 0; o < origins.size(); ++o) {
          if (origin_counts[o] > 0) r.visitor_home_cbgs[origins[o]] += origin_counts[o];
        }
        if (visits > 0) {
          const std::int64_t half = (visits + 1) / 2;
          std::int64_t acc = 0;
          for (std::size_t b = 0; b < buckets.size(); ++b) {
            acc += buckets[b];
            if (acc >= half) {
              r.median_dwell_minutes = kBucketMinutes[b];
              break;
            }
          }
          r.distance_from_home_meters = static_cast<double>(1000 + rng.below(9000));
        }
        out.push_back(std::move(r));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FlatWeeklyRecord& a, const FlatWeeklyRecord& b) {
    return std::tie(a.place_id, a.period_start) < std::tie(b.place_id, b.period_start);
  });
  std::sort(roster.begin(), roster.end(),
            [](const auto& a, const auto& b) { return a.place_id < b.place_id; });
  return out;
}

std::int32_t home_minutes(const HomeDwellProfile& p, Date day) {
  for (const auto& period : p.periods) {
    if (period.range.contains(day)) return period.minutes;
  }
  return p.baseline_minutes;
}

std::vector<SocialDistancingRecord> make_social_distancing(const SynthConfig& c,
                                                           const std::vector<Cbg>& cbgs) {
  std::vector<SocialDistancingRecord> out;
  const auto weeks = week_starts(c.weeks);
  if (weeks.empty()) return out;
  const Date first = weeks.front();
  const Date last = weeks.back() + (kPeriodDays - 1);
  Rng rng(c.seed, 0x534443ULL);
  const auto noise = static_cast<std::uint64_t>(c.home_dwell.daily_noise_minutes);
  for (const auto& cbg : cbgs) {
    for (Date day = first; day <= last; day = day + 1) {
      const std::int64_t jitter = static_cast<std::int64_t>(rng.below(2 * noise + 1)) -
                                  static_cast<std::int64_t>(noise);
      const std::int64_t minutes =
          std::clamp<std::int64_t>(home_minutes(c.home_dwell, day) + jitter, 0, 1440);
      SocialDistancingRecord r;
      r.origin_cbg = cbg.id;
      r.date = day;
      r.device_count = cbg.devices;
      r.median_home_dwell_time_minutes = static_cast<double>(minutes);
      r.median_distance_traveled_from_home_meters =
          static_cast<double>(std::max<std::int64_t>(500, 9000 - (minutes - 600) * 25 +
                                                              static_cast<std::int64_t>(rng.below(1001)) - 500));
      r.completely_home_device_count = std::clamp<std::int64_t>(cbg.devices * (minutes - 400) / 1000, 0, cbg.devices);
      out.push_back(std::move(r));
    }
  }
  return out;
}

PopulationTable make_population(const SynthConfig& c, const std::vector<Cbg>& cbgs) {
  const auto& pc = c.population;
  if (!pc.counts.empty()) return PopulationTable(pc.level, pc.counts);
  std::map<std::string, std::int64_t> devices;
  for (const auto& cbg : cbgs) devices[roll_up(cbg.id, pc.level)] += cbg.devices;
  std::map<std::string, std::int64_t> rows;
  for (const auto& [region, n] : devices) {
    auto it = pc.target_rates.find(region);
    const double rate = it == pc.target_rates.end() ? pc.target_rate : it->second;
    rows[region] = std::llround(static_cast<double>(n) / rate);
  }
  return PopulationTable(pc.level, std::move(rows));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw PersistenceError("cannot write " + path.string());
}

}  // namespace

SynthData generate_data(const SynthConfig& config) {
  config.validate();
  SynthData data;
  const auto cbgs = make_cbgs(config);
  data.weekly = make_weekly(config, cbgs, data.roster);
  data.social_distancing = make_social_distancing(config, cbgs);
  data.population = make_population(config, cbgs);
  data.calendar = config.calendar.empty() ? PolicyCalendar::minnesota() : PolicyCalendar(config.calendar);
  return data;
}

std::vector<ManifestEntry> generate(const SynthConfig& config, const std::filesystem::path& dir) {
  const SynthData data = generate_data(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw PersistenceError("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream weekly;
  ingest::write_flat_weekly(weekly, data.weekly);
  write_text(dir / kSynthFiles[0], weekly.str());
  std::ostringstream sd;
  ingest::write_social_distancing(sd, data.social_distancing);
  write_text(dir / kSynthFiles[1], sd.str());
  data.population.save_csv(dir / kSynthFiles[2]);
  data.calendar.save_csv(dir / kSynthFiles[3]);
  analytics::save_outbreak_roster(dir / kSynthFiles[4], data.roster);

  return {{kSynthFiles[0], data.weekly.size()},
          {kSynthFiles[1], data.social_distancing.size()},
          {kSynthFiles[2], data.population.rows().size()},
          {kSynthFiles[3], data.calendar.entries().size()},
          {kSynthFiles[4], data.roster.size()}};
}

}  // namespace mw::synth
