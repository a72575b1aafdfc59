#include "helpers.hpp"
#include "memqa/calendar.hpp"

using namespace memqa;
using namespace std::chrono;

TEST_CASE("local_date honours the offset") {
  // 2024-05-06T02:30Z
  const std::int64_t t = 1714962600;
  CHECK(format_date(local_date(t, 0)) == "2024-05-06");
  CHECK(format_date(local_date(t, -240)) == "2024-05-05");
  CHECK(format_date(local_date(t, 600)) == "2024-05-06");
  CHECK(format_date(local_date(-1, 0)) == "1969-12-31");
}

TEST_CASE("local_midnight round trip") {
  const Date d = year{2024} / May / 6;
  CHECK(local_midnight(d, 0) == 1714953600);
  CHECK(local_midnight(d, -240) == 1714953600 + 4 * 3600);
  CHECK(local_date(local_midnight(d, 330), 330) == d);
}

TEST_CASE("day arithmetic") {
  const Date d = year{2024} / February / 28;
  CHECK(format_date(add_days(d, 1)) == "2024-02-29");
  CHECK(format_date(add_days(d, 2)) == "2024-03-01");
  CHECK(format_date(add_days(year{2024} / January / 1, -1)) == "2023-12-31");
  CHECK(days_between(year{2024} / January / 1, year{2025} / January / 1) == 366);
}

TEST_CASE("weekday names and recall time") {
  CHECK(weekday_name(year{2024} / May / 6) == "Monday");
  CHECK(weekday_name(year{2024} / June / 9) == "Sunday");
  CHECK(format_recall_time(1714953600 + 3600, 0) == "2024-05-06 Monday");
  CHECK(format_local_datetime(1714953600 + 9 * 3600 + 5 * 60, 60) == "2024-05-06 10:05 Monday");
}

TEST_CASE("iso parsing") {
  CHECK(parse_iso_date("2024-02-29").has_value());
  CHECK_FALSE(parse_iso_date("2023-02-29").has_value());
  CHECK_FALSE(parse_iso_date("2024-13-01").has_value());
  CHECK_FALSE(parse_iso_date("24-01-01").has_value());
  CHECK(parse_iso_instant("2024-05-06") == 1714953600);
  CHECK(parse_iso_instant("2024-05-06T01:00:00Z") == 1714957200);
  CHECK(parse_iso_instant("2024-05-06T05:00+04:00") == 1714957200);
  CHECK(parse_iso_instant("2024-05-05T21:00:00-04:00") == 1714957200);
  CHECK_FALSE(parse_iso_instant("yesterday").has_value());
  CHECK_FALSE(parse_iso_instant("2024-05-06T25:00Z").has_value());
}
