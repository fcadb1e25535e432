#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mw {

// Calendar date with day resolution. Stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;

  static constexpr Date from_days(std::int32_t days_since_epoch) {
    Date d;
    d.days_ = days_since_epoch;
    return d;
  }

  // Throws ArgumentError for an invalid calendar date.
  static Date from_ymd(int year, unsigned month, unsigned day);

  // Accepts YYYY-MM-DD (optionally followed by a 'T' time suffix, which is
  // ignored) and MM-DD-YYYY.
  static std::optional<Date> parse(std::string_view text);

  // Like parse() but throws ArgumentError naming the offending text.
  static Date parse_or_throw(std::string_view text);

  [[nodiscard]] constexpr std::int32_t days() const { return days_; }
  [[nodiscard]] std::chrono::year_month_day ymd() const;
  [[nodiscard]] std::string iso() const;

  constexpr auto operator<=>(const Date&) const = default;

  friend constexpr Date operator+(Date d, std::int32_t n) { return from_days(d.days_ + n); }
  friend constexpr Date operator-(Date d, std::int32_t n) { return from_days(d.days_ - n); }
  friend constexpr std::int32_t operator-(Date a, Date b) { return a.days_ - b.days_; }

 private:
  std::int32_t days_ = 0;
};

// Closed interval of dates [start, end].
struct DateRange {
  Date start;
  Date end;

  [[nodiscard]] bool well_ordered() const { return start <= end; }
  [[nodiscard]] bool contains(Date d) const { return start <= d && d <= end; }

  // True when a weekly period [period_start, period_end] lies fully inside.
  [[nodiscard]] bool covers(Date period_start, Date period_end) const {
    return period_start >= start && period_end <= end;
  }

  bool operator==(const DateRange&) const = default;
};

}  // namespace mw
