#pragma once

#include <array>
#include <filesystem>
#include <string_view>

#include "mw/core/warehouse.hpp"

namespace mw {

// File names of a snapshot directory, one CSV per table.
inline constexpr std::array<std::string_view, 11> kSnapshotFiles = {
    "countries.csv",   "states.csv",      "cbgs.csv",           "pois.csv",
    "brands.csv",      "brand_poi.csv",   "periods.csv",        "visit_facts.csv",
    "dwell_facts.csv", "interval_facts.csv", "origin_facts.csv"};

// Writes every table with a header row, sorted by primary key. Creates the
// directory if needed. Throws PersistenceError naming the file on failure.
void save_snapshot(const Warehouse& warehouse, const std::filesystem::path& directory);

// Reads a snapshot and re-validates referential integrity. Throws LoadError
// naming the file (and row, for bad rows).
Warehouse load_snapshot(const std::filesystem::path& directory);

}  // namespace mw
