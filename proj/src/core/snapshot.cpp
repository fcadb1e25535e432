#include "mw/core/snapshot.hpp"

#include <fstream>
#include <functional>
#include <vector>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"

namespace mw {
namespace fs = std::filesystem;
namespace {

// LoadError already carrying table and row context.
class RowError : public LoadError {
 public:
  using LoadError::LoadError;
};

std::string opt(const std::optional<double>& v) { return v ? csv::format_exact(*v) : ""; }

class TableWriter {
 public:
  TableWriter(const fs::path& directory, std::string_view name,
              std::initializer_list<std::string> header)
      : path_(directory / name), out_(path_, std::ios::binary) {
    if (!out_) throw PersistenceError("cannot write " + path_.string());
    csv::write_row(out_, header);
  }

  void row(std::initializer_list<std::string> fields) { csv::write_row(out_, fields); }

  void close() {
    out_.close();
    if (!out_) throw PersistenceError("cannot write " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

// Field accessors for one data row of a snapshot table.
class Row {
 public:
  Row(const std::vector<std::string>& fields, std::string where)
      : fields_(fields), where_(std::move(where)) {}

  const std::string& str(std::size_t i) const { return fields_[i]; }

  std::int64_t integer(std::size_t i) const {
    auto v = csv::parse_int(fields_[i]);
    if (!v) fail("invalid integer '" + fields_[i] + "'");
    return *v;
  }

  double real(std::size_t i) const {
    auto v = csv::parse_double(fields_[i]);
    if (!v) fail("invalid number '" + fields_[i] + "'");
    return *v;
  }

  std::optional<double> optional_real(std::size_t i) const {
    if (fields_[i].empty()) return std::nullopt;
    return real(i);
  }

  Date date(std::size_t i) const {
    auto d = Date::parse(fields_[i]);
    if (!d) fail("invalid date '" + fields_[i] + "'");
    return *d;
  }

  DwellBucket bucket(std::size_t i) const {
    auto b = parse_dwell_bucket(fields_[i]);
    if (!b) fail("unknown bucket '" + fields_[i] + "'");
    return *b;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw RowError(where_ + ": " + message);
  }

 private:
  const std::vector<std::string>& fields_;
  std::string where_;
};

void read_table(const fs::path& directory, std::string_view name,
                const std::vector<std::string>& expected_header,
                const std::function<void(const Row&)>& on_row) {
  const fs::path path = directory / name;
  if (!fs::exists(path)) throw LoadError("missing snapshot file " + path.string());
  std::optional<csv::Reader> reader;
  try {
    reader.emplace(csv::Reader::open(path));
  } catch (const Error& e) {
    throw LoadError(e.what());
  }
  if (reader->header() != expected_header) {
    throw LoadError(path.string() + ": unexpected header");
  }
  std::vector<std::string> fields;
  while (true) {
    try {
      if (!reader->next(fields)) break;
    } catch (const FormatError& e) {
      throw LoadError(path.string() + ": " + e.what());
    }
    const std::string where = std::string(name) + " row " + std::to_string(reader->row_number());
    if (fields.size() != expected_header.size()) throw LoadError(where + ": wrong field count");
    Row row(fields, where);
    try {
      on_row(row);
    } catch (const RowError&) {
      throw;
    } catch (const Error& e) {
      row.fail(e.what());
    }
  }
}

}  // namespace

void save_snapshot(const Warehouse& w, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) {
    throw PersistenceError("cannot create snapshot directory " + directory.string());
  }

  {
    TableWriter t(directory, "countries.csv", {"code"});
    for (const auto& code : w.countries()) t.row({code});
    t.close();
  }
  {
    TableWriter t(directory, "states.csv", {"code", "country"});
    for (const auto& [code, row] : w.states()) t.row({row.code, row.country});
    t.close();
  }
  {
    TableWriter t(directory, "cbgs.csv", {"id", "state"});
    for (const auto& [id, row] : w.cbgs()) t.row({row.id, row.state});
    t.close();
  }
  {
    TableWriter t(directory, "pois.csv",
                  {"place_id", "location_name", "naics_code", "cbg", "latitude", "longitude"});
    for (const auto& [id, p] : w.pois()) {
      t.row({p.place_id, p.location_name, p.naics.str(), p.cbg, opt(p.latitude), opt(p.longitude)});
    }
    t.close();
  }
  {
    TableWriter t(directory, "brands.csv", {"name"});
    for (const auto& name : w.brands()) t.row({name});
    t.close();
  }
  {
    TableWriter t(directory, "brand_poi.csv", {"brand", "place_id"});
    for (const auto& [brand, place] : w.brand_poi()) t.row({brand, place});
    t.close();
  }
  {
    TableWriter t(directory, "periods.csv", {"start", "end"});
    for (const auto& [start, p] : w.periods()) t.row({p.start.iso(), p.end.iso()});
    t.close();
  }
  {
    TableWriter t(directory, "visit_facts.csv",
                  {"place_id", "period_start", "raw_visits", "raw_visitors", "median_dwell",
                   "distance_from_home"});
    for (const auto& [key, f] : w.visit_facts()) {
      t.row({f.place_id, f.period_start.iso(), std::to_string(f.raw_visits),
             std::to_string(f.raw_visitors), csv::format_exact(f.median_dwell),
             opt(f.distance_from_home)});
    }
    t.close();
  }
  {
    TableWriter t(directory, "dwell_facts.csv", {"place_id", "period_start", "dwell_bucket", "visits"});
    for (const auto& [key, f] : w.dwell_facts()) {
      t.row({f.place_id, f.period_start.iso(), std::string(label(f.bucket)),
             std::to_string(f.visits)});
    }
    t.close();
  }
  {
    TableWriter t(directory, "interval_facts.csv", {"place_id", "period_start", "day_index", "visits"});
    for (const auto& [key, f] : w.interval_facts()) {
      t.row({f.place_id, f.period_start.iso(), std::to_string(f.day_index),
             std::to_string(f.visits)});
    }
    t.close();
  }
  {
    TableWriter t(directory, "origin_facts.csv",
                  {"place_id", "period_start", "origin_cbg", "visitor_count"});
    for (const auto& [key, f] : w.origin_facts()) {
      t.row({f.place_id, f.period_start.iso(), f.origin_cbg, std::to_string(f.visitor_count)});
    }
    t.close();
  }
}

Warehouse load_snapshot(const fs::path& directory) {
  if (!fs::is_directory(directory)) {
    throw LoadError("snapshot directory " + directory.string() + " does not exist");
  }
  Warehouse w;
  read_table(directory, "countries.csv", {"code"}, [&](const Row& r) { w.add_country(r.str(0)); });
  read_table(directory, "states.csv", {"code", "country"},
             [&](const Row& r) { w.add_state({r.str(0), r.str(1)}); });
  read_table(directory, "cbgs.csv", {"id", "state"},
             [&](const Row& r) { w.add_cbg({r.str(0), r.str(1)}); });
  read_table(directory, "pois.csv",
             {"place_id", "location_name", "naics_code", "cbg", "latitude", "longitude"},
             [&](const Row& r) {
               w.add_poi({r.str(0), r.str(1), NaicsCode{static_cast<std::int32_t>(r.integer(2))},
                          r.str(3), r.optional_real(4), r.optional_real(5)});
             });
  read_table(directory, "brands.csv", {"name"}, [&](const Row& r) { w.add_brand(r.str(0)); });
  read_table(directory, "brand_poi.csv", {"brand", "place_id"},
             [&](const Row& r) { w.link_brand(r.str(0), r.str(1)); });
  read_table(directory, "periods.csv", {"start", "end"},
             [&](const Row& r) { w.add_period({r.date(0), r.date(1)}); });
  read_table(directory, "visit_facts.csv",
             {"place_id", "period_start", "raw_visits", "raw_visitors", "median_dwell",
              "distance_from_home"},
             [&](const Row& r) {
               w.add_visit_fact({r.str(0), r.date(1), r.integer(2), r.integer(3), r.real(4),
                                 r.optional_real(5)});
             });
  read_table(directory, "dwell_facts.csv", {"place_id", "period_start", "dwell_bucket", "visits"},
             [&](const Row& r) {
               w.add_dwell_fact({r.str(0), r.date(1), r.bucket(2), r.integer(3)});
             });
  read_table(directory, "interval_facts.csv", {"place_id", "period_start", "day_index", "visits"},
             [&](const Row& r) {
               w.add_interval_fact(
                   {r.str(0), r.date(1), static_cast<int>(r.integer(2)), r.integer(3)});
             });
  read_table(directory, "origin_facts.csv",
             {"place_id", "period_start", "origin_cbg", "visitor_count"}, [&](const Row& r) {
               w.add_origin_fact({r.str(0), r.date(1), r.str(2), r.integer(3)});
             });
  return w;
}

}  // namespace mw
