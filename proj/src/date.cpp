#include "temport/date.hpp"

#include <cctype>
#include <charconv>
#include <chrono>

#include "temport/error.hpp"

namespace temport {

namespace {

std::chrono::year_month_day to_ymd(int days) {
  return std::chrono::year_month_day(
      std::chrono::sys_days(std::chrono::days(days)));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
  std::chrono::year_month_day ymd{std::chrono::year(year),
                                  std::chrono::month(unsigned(month)),
                                  std::chrono::day(unsigned(day))};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date " + std::to_string(year) + "-" +
                    std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(int(std::chrono::sys_days(ymd).time_since_epoch().count()));
}

std::optional<Date> Date::try_parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  std::string_view y = iso.substr(0, 4);
  std::string_view m = iso.substr(5, 2);
  std::string_view d = iso.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year(to_int(y)),
                                  std::chrono::month(unsigned(to_int(m))),
                                  std::chrono::day(unsigned(to_int(d)))};
  if (!ymd.ok()) return std::nullopt;
  return Date(int(std::chrono::sys_days(ymd).time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
  auto d = try_parse(iso);
  if (!d) throw DataError("invalid date '" + std::string(iso) + "', expected YYYY-MM-DD");
  return *d;
}

std::string Date::str() const {
  auto ymd = to_ymd(days_);
  char buf[16];
  int y = int(ymd.year());
  unsigned m = unsigned(ymd.month());
  unsigned d = unsigned(ymd.day());
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

int Date::year() const { return int(to_ymd(days_).year()); }
int Date::month() const { return int(unsigned(to_ymd(days_).month())); }
int Date::day() const { return int(unsigned(to_ymd(days_).day())); }

int Date::weekday() const {
  std::chrono::weekday wd{std::chrono::sys_days(std::chrono::days(days_))};
  return int(wd.iso_encoding()) - 1;
}

}  // namespace temport
