#include "memqa/calendar.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace memqa {

namespace {

using std::chrono::days;
using std::chrono::sys_days;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

Date local_date(std::int64_t epoch_seconds, int tz_offset_minutes) {
  const std::int64_t local = epoch_seconds + std::int64_t{tz_offset_minutes} * 60;
  return Date{sys_days{days{floor_div(local, kSecondsPerDay)}}};
}

std::int64_t local_midnight(const Date& date, int tz_offset_minutes) {
  const auto day_index = sys_days{date}.time_since_epoch().count();
  return std::int64_t{day_index} * kSecondsPerDay - std::int64_t{tz_offset_minutes} * 60;
}

Date add_days(const Date& date, int n) { return Date{sys_days{date} + days{n}}; }

int days_between(const Date& from, const Date& to) {
  return static_cast<int>((sys_days{to} - sys_days{from}).count());
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string weekday_name(const Date& date) {
  static constexpr std::array<const char*, 7> kNames = {
      "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};
  return kNames[std::chrono::weekday{sys_days{date}}.c_encoding()];
}

std::string format_recall_time(std::int64_t epoch_seconds, int tz_offset_minutes) {
  const Date d = local_date(epoch_seconds, tz_offset_minutes);
  return format_date(d) + " " + weekday_name(d);
}

std::string format_local_datetime(std::int64_t epoch_seconds, int tz_offset_minutes) {
  const Date d = local_date(epoch_seconds, tz_offset_minutes);
  const std::int64_t local = epoch_seconds + std::int64_t{tz_offset_minutes} * 60;
  const std::int64_t sec_of_day = local - floor_div(local, kSecondsPerDay) * kSecondsPerDay;
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(sec_of_day / 3600),
                static_cast<int>((sec_of_day % 3600) / 60));
  return format_date(d) + " " + buf + " " + weekday_name(d);
}

std::optional<std::int64_t> parse_iso_instant(std::string_view text) {
  if (text.size() < 10) return std::nullopt;
  auto date = parse_iso_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  std::int64_t t = local_midnight(*date, 0);
  if (text.size() == 10) return t;
  if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
  std::string_view rest = text.substr(11);
  int hh = 0, mm = 0, ss = 0;
  if (rest.size() < 5 || rest[2] != ':' || !parse_int(rest.substr(0, 2), hh) ||
      !parse_int(rest.substr(3, 2), mm)) {
    return std::nullopt;
  }
  rest.remove_prefix(5);
  if (rest.size() >= 3 && rest[0] == ':') {
    if (!parse_int(rest.substr(1, 2), ss)) return std::nullopt;
    rest.remove_prefix(3);
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  t += hh * 3600 + mm * 60 + ss;
  if (rest.empty() || rest == "Z") return t;
  if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
    int oh = 0, om = 0;
    if (!parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om)) {
      return std::nullopt;
    }
    const int offset = (oh * 60 + om) * (rest[0] == '+' ? 1 : -1);
    return t - std::int64_t{offset} * 60;
  }
  return std::nullopt;
}

}  // namespace memqa
