#include "mw/core/calendar.hpp"

#include <fstream>

#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"

namespace mw {

PolicyCalendar::PolicyCalendar(std::vector<CalendarEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].label.empty()) {
      throw ArgumentError("calendar entry " + entries_[i].date.iso() + " has an empty label");
    }
    if (i > 0 && entries_[i].date <= entries_[i - 1].date) {
      throw ArgumentError("calendar dates must strictly increase at " + entries_[i].date.iso());
    }
  }
}

std::vector<CalendarEntry> PolicyCalendar::within(Date first, Date last) const {
  std::vector<CalendarEntry> out;
  for (const auto& e : entries_) {
    if (e.date >= first && e.date <= last) out.push_back(e);
  }
  return out;
}

PolicyCalendar PolicyCalendar::minnesota() {
  return PolicyCalendar({
      {Date::from_ymd(2020, 3, 9), "University of Minnesota Spring break"},
      {Date::from_ymd(2020, 3, 17), "University of Minnesota school closing"},
      {Date::from_ymd(2020, 3, 27), "MN stay-at-home"},
      {Date::from_ymd(2020, 5, 18), "MN reopening Phase 1"},
      {Date::from_ymd(2020, 6, 1), "MN reopening Phase 2"},
      {Date::from_ymd(2020, 6, 10), "MN reopening Phase 3"},
      {Date::from_ymd(2020, 11, 16), "MN shutdown order for Bars and Restaurants"},
      {Date::from_ymd(2021, 1, 11), "MN reopening order for Bars and Restaurants"},
      {Date::from_ymd(2021, 5, 27), "No limits on size and no social distancing requirements."},
  });
}

PolicyCalendar PolicyCalendar::load_csv(const std::filesystem::path& path) {
  auto reader = csv::Reader::open(path);
  const auto date_col = reader.column("date");
  const auto label_col = reader.column("label");
  if (!date_col || !label_col) {
    throw FormatError(path.string() + ": calendar header must contain date,label");
  }
  std::vector<CalendarEntry> entries;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != reader.header().size()) {
      throw FormatError(path.string() + " row " + std::to_string(reader.row_number()) +
                        ": wrong field count");
    }
    auto date = Date::parse(fields[*date_col]);
    if (!date) {
      throw FormatError(path.string() + " row " + std::to_string(reader.row_number()) +
                        ": invalid date '" + fields[*date_col] + "'");
    }
    entries.push_back({*date, fields[*label_col]});
  }
  try {
    return PolicyCalendar(std::move(entries));
  } catch (const ArgumentError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void PolicyCalendar::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write " + path.string());
  csv::write_row(out, {"date", "label"});
  for (const auto& e : entries_) csv::write_row(out, {e.date.iso(), e.label});
  if (!out) throw PersistenceError("cannot write " + path.string());
}

}  // namespace mw
