#include "mw/core/population.hpp"

#include <fstream>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"

namespace mw {

PopulationTable::PopulationTable(RegionLevel level, std::map<std::string, std::int64_t> rows)
    : level_(level), rows_(std::move(rows)) {
  const std::size_t len = region_id_length(level_);
  for (const auto& [id, population] : rows_) {
    if (id.size() != len || !is_digits(id)) {
      throw ArgumentError("region id '" + id + "' is not a " + std::string(to_string(level_)) +
                          " id");
    }
    if (population < 0) throw ArgumentError("negative population for region " + id);
  }
}

PopulationTable PopulationTable::rolled_up(RegionLevel level) const {
  if (!finer_or_equal(level_, level)) {
    throw ArgumentError("cannot roll " + std::string(to_string(level_)) + " population up to " +
                        std::string(to_string(level)));
  }
  std::map<std::string, std::int64_t> out;
  for (const auto& [id, population] : rows_) out[roll_up(id, level)] += population;
  return PopulationTable(level, std::move(out));
}

PopulationTable PopulationTable::load_csv(const std::filesystem::path& path) {
  auto reader = csv::Reader::open(path);
  const auto id_col = reader.column("region_id");
  const auto pop_col = reader.column("population");
  if (!id_col || !pop_col) {
    throw FormatError(path.string() + ": population header must contain region_id,population");
  }
  std::optional<RegionLevel> level;
  std::map<std::string, std::int64_t> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::string where = path.string() + " row " + std::to_string(reader.row_number());
    if (fields.size() != reader.header().size()) throw FormatError(where + ": wrong field count");
    const std::string& id = fields[*id_col];
    auto row_level = level_for_id_length(id.size());
    if (!row_level || !is_digits(id)) throw FormatError(where + ": invalid region id '" + id + "'");
    if (level && *level != *row_level) throw FormatError(where + ": mixed region levels");
    level = row_level;
    auto population = csv::parse_int(fields[*pop_col]);
    if (!population || *population < 0) throw FormatError(where + ": invalid population");
    if (!rows.emplace(id, *population).second) {
      throw FormatError(where + ": duplicate region id '" + id + "'");
    }
  }
  return PopulationTable(level.value_or(RegionLevel::kState), std::move(rows));
}

void PopulationTable::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write " + path.string());
  csv::write_row(out, {"region_id", "population"});
  for (const auto& [id, population] : rows_) csv::write_row(out, {id, std::to_string(population)});
  if (!out) throw PersistenceError("cannot write " + path.string());
}

}  // namespace mw
