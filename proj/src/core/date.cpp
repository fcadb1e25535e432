#include "mw/core/date.hpp"

#include <charconv>
#include <cstdio>

#include "mw/core/error.hpp"

namespace mw {
namespace {

std::optional<int> parse_digits(std::string_view text) {
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<Date> make(int year, int month, int day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  return Date::from_days(
      static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  auto d = make(year, static_cast<int>(month), static_cast<int>(day));
  if (!d) {
    throw ArgumentError("invalid calendar date " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
  }
  return *d;
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() > 10 && text[10] == 'T') text = text.substr(0, 10);
  if (text.size() != 10) return std::nullopt;
  if (text[4] == '-' && text[7] == '-') {
    auto y = parse_digits(text.substr(0, 4));
    auto m = parse_digits(text.substr(5, 2));
    auto d = parse_digits(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    return make(*y, *m, *d);
  }
  if (text[2] == '-' && text[5] == '-') {
    auto m = parse_digits(text.substr(0, 2));
    auto d = parse_digits(text.substr(3, 2));
    auto y = parse_digits(text.substr(6, 4));
    if (!y || !m || !d) return std::nullopt;
    return make(*y, *m, *d);
  }
  return std::nullopt;
}

Date Date::parse_or_throw(std::string_view text) {
  auto d = parse(text);
  if (!d) throw ArgumentError("invalid date '" + std::string(text) + "'");
  return *d;
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
}

std::string Date::iso() const {
  const auto v = ymd();
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(v.year()),
                static_cast<unsigned>(v.month()), static_cast<unsigned>(v.day()));
  return buf;
}

}  // namespace mw
