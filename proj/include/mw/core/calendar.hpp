#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mw/core/date.hpp"

namespace mw {

struct CalendarEntry {
  Date date;
  std::string label;

  bool operator==(const CalendarEntry&) const = default;
};

// Dated policy interventions. Dates strictly increase; labels are nonempty.
class PolicyCalendar {
 public:
  PolicyCalendar() = default;
  // Throws ArgumentError when the ordering or label invariant is violated.
  explicit PolicyCalendar(std::vector<CalendarEntry> entries);

  [[nodiscard]] const std::vector<CalendarEntry>& entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  // Entries with first <= date <= last.
  [[nodiscard]] std::vector<CalendarEntry> within(Date first, Date last) const;

  // Minnesota COVID-19 intervention calendar, March 2020 to May 2021.
  static PolicyCalendar minnesota();

  // CSV with header "date,label".
  static PolicyCalendar load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

  bool operator==(const PolicyCalendar&) const = default;

 private:
  std::vector<CalendarEntry> entries_;
};

}  // namespace mw
