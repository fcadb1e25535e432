#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "mw/core/geo.hpp"

namespace mw {

// Resident population per region, all regions at one census level.
class PopulationTable {
 public:
  PopulationTable() = default;
  // Throws ArgumentError if an id does not match the level's id length or a
  // population is negative.
  PopulationTable(RegionLevel level, std::map<std::string, std::int64_t> rows);

  [[nodiscard]] RegionLevel level() const { return level_; }
  [[nodiscard]] const std::map<std::string, std::int64_t>& rows() const { return rows_; }
  [[nodiscard]] bool empty() const { return rows_.empty(); }

  // Sums populations into a coarser (or equal) level.
  [[nodiscard]] PopulationTable rolled_up(RegionLevel level) const;

  // CSV "region_id,population"; the level is inferred from id length and
  // must be uniform.
  static PopulationTable load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

  bool operator==(const PopulationTable&) const = default;

 private:
  RegionLevel level_ = RegionLevel::kState;
  std::map<std::string, std::int64_t> rows_;
};

}  // namespace mw
