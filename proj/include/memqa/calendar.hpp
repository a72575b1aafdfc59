#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace memqa {

using Date = std::chrono::year_month_day;

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Calendar date of a UTC epoch instant as seen at the given offset.
Date local_date(std::int64_t epoch_seconds, int tz_offset_minutes);

// Epoch seconds of local midnight starting `date`.
std::int64_t local_midnight(const Date& date, int tz_offset_minutes);

Date add_days(const Date& date, int days);
int days_between(const Date& from, const Date& to);

std::string format_date(const Date& date);            // YYYY-MM-DD
std::optional<Date> parse_iso_date(std::string_view text);
std::string weekday_name(const Date& date);           // Monday .. Sunday

// "YYYY-MM-DD Weekday", the recall_time form used by the datetime prompt.
std::string format_recall_time(std::int64_t epoch_seconds, int tz_offset_minutes);

// "YYYY-MM-DD HH:MM Weekday" in local time.
std::string format_local_datetime(std::int64_t epoch_seconds, int tz_offset_minutes);

// Parses "YYYY-MM-DDTHH:MM[:SS][Z|+HH:MM|-HH:MM]" or a bare date (UTC midnight).
std::optional<std::int64_t> parse_iso_instant(std::string_view text);

}  // namespace memqa
