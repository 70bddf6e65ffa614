#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace temport {

/// Calendar date at day resolution, proleptic Gregorian. Text form is ISO
/// "YYYY-MM-DD"; there is no time of day and no timezone.
class Date {
 public:
  Date() = default;

  static Date from_ymd(int year, int month, int day);  // throws DataError
  static Date from_serial(int days) { return Date(days); }
  static std::optional<Date> try_parse(std::string_view iso);
  static Date parse(std::string_view iso);  // throws DataError

  std::string str() const;

  /// Days since 1970-01-01.
  int serial() const { return days_; }

  int year() const;
  int month() const;    // 1..12
  int day() const;      // 1..31
  int weekday() const;  // 0 = Monday .. 6 = Sunday

  Date plus_days(int n) const { return Date(days_ + n); }
  Date monday_of_week() const { return Date(days_ - weekday()); }

  friend int operator-(Date a, Date b) { return a.days_ - b.days_; }
  friend auto operator<=>(Date, Date) = default;

 private:
  explicit Date(int days) : days_(days) {}
  int days_ = 0;
};

}  // namespace temport
