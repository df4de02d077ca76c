#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cop {

/// Calendar date with day resolution. Expert strategies use kEpoch so they are
/// members of every temporal strategy set.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;

  /// Days since 1970-01-01 (proleptic Gregorian).
  std::int64_t serial_days() const {
    // Howard Hinnant's days_from_civil.
    int y = year - (month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2) / 5 +
        static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<std::int64_t>(doe) - 719468;
  }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  static Date parse(std::string_view s);
  static constexpr Date epoch() { return Date{1970, 1, 1}; }
};

/// Real-valued months between two dates, at 30.4375 days per month.
inline double months_between(const Date& from, const Date& to) {
  return static_cast<double>(to.serial_days() - from.serial_days()) / 30.4375;
}

inline Date Date::parse(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
      std::sscanf(std::string(s).c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    throw std::invalid_argument("Date: expected YYYY-MM-DD, got '" + std::string(s) + "'");
  if (m < 1 || m > 12 || d < 1 || d > 31)
    throw std::invalid_argument("Date: out of range '" + std::string(s) + "'");
  return Date{y, m, d};
}

}  // namespace cop
