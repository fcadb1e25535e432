#include <fstream>

#include "mw/analytics/analytics.hpp"
#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"

namespace mw::analytics {

NaicsLookup NaicsLookup::bundled() {
  NaicsLookup lookup;
  lookup.names_ = {
      {NaicsCode{445110}, "Supermarkets and Other Grocery (except Convenience) Stores"},
      {NaicsCode{447110}, "Gasoline Stations with Convenience Stores"},
      {NaicsCode{452319}, "All Other General Merchandise Stores"},
      {NaicsCode{531120}, "Lessors of Nonresidential Buildings (except Miniwarehouses)"},
      {NaicsCode{611110}, "Elementary and Secondary Schools"},
      {NaicsCode{712190}, "Nature Parks and Other Similar Institutions"},
      {NaicsCode{713940}, "Fitness and Recreational Sports Centers"},
      {NaicsCode{722410}, "Drinking Places (Alcoholic Beverages)"},
      {NaicsCode{722511}, "Full-Service Restaurants"},
      {NaicsCode{722513}, "Limited-Service Restaurants"},
  };
  return lookup;
}

NaicsLookup NaicsLookup::load_csv(const std::filesystem::path& path) {
  auto reader = csv::Reader::open(path);
  const auto code_col = reader.column("code");
  const auto name_col = reader.column("name");
  if (!code_col || !name_col) throw FormatError(path.string() + ": header must contain code,name");
  NaicsLookup lookup;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    auto code = csv::parse_int(fields.size() > *code_col ? fields[*code_col] : "");
    if (!code || fields.size() != reader.header().size()) {
      throw FormatError(path.string() + " row " + std::to_string(reader.row_number()) + ": bad row");
    }
    lookup.names_[NaicsCode{static_cast<std::int32_t>(*code)}] = fields[*name_col];
  }
  return lookup;
}

std::string NaicsLookup::name(NaicsCode code) const {
  auto it = names_.find(code);
  return it == names_.end() ? code.str() : it->second;
}

std::vector<RosterEntry> load_outbreak_roster(const std::filesystem::path& path) {
  auto reader = csv::Reader::open(path);
  const auto id_col = reader.column("place_id");
  const auto month_col = reader.column("month_linked");
  if (!id_col || !month_col) {
    throw FormatError(path.string() + ": header must contain place_id,month_linked");
  }
  std::vector<RosterEntry> roster;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != reader.header().size() || fields[*id_col].empty()) {
      throw FormatError(path.string() + " row " + std::to_string(reader.row_number()) + ": bad row");
    }
    roster.push_back({fields[*id_col], fields[*month_col]});
  }
  return roster;
}

void save_outbreak_roster(const std::filesystem::path& path, std::span<const RosterEntry> roster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write " + path.string());
  csv::write_row(out, {"place_id", "month_linked"});
  for (const auto& e : roster) csv::write_row(out, {e.place_id, e.month_linked});
  out.close();
  if (!out) throw PersistenceError("cannot write " + path.string());
}

}  // namespace mw::analytics
