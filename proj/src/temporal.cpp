#include "memqa/temporal.hpp"

#include <array>
#include <cmath>
#include <regex>

#include "memqa/error.hpp"
#include "memqa/log.hpp"
#include "memqa/prompts.hpp"
#include "memqa/text.hpp"

namespace memqa {

void validate(const TemporalParse& parse) {
  if (parse.start.has_value() != parse.end.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "search range needs both start and end");
  }
  if (parse.start && *parse.start > *parse.end) {
    throw Error(ErrorCode::kInvalidArgument, "search range start after end");
  }
}

nlohmann::ordered_json to_json(const TemporalParse& parse) {
  nlohmann::ordered_json j;
  j["search_start_date"] = parse.start ? format_date(*parse.start) : "";
  j["search_end_date"] = parse.end ? format_date(*parse.end) : "";
  j["search_recent"] = parse.recent;
  return j;
}

std::optional<TemporalParse> temporal_parse_from_json(const nlohmann::json& j) {
  if (!j.is_object()) return std::nullopt;
  auto start = j.find("search_start_date");
  auto end = j.find("search_end_date");
  auto recent = j.find("search_recent");
  if (start == j.end() || end == j.end() || recent == j.end()) return std::nullopt;
  if (!start->is_string() || !end->is_string() || !recent->is_boolean()) return std::nullopt;
  TemporalParse p;
  p.recent = recent->get<bool>();
  const auto s = start->get<std::string>();
  const auto e = end->get<std::string>();
  if (!s.empty()) {
    p.start = parse_iso_date(s);
    if (!p.start) return std::nullopt;
  }
  if (!e.empty()) {
    p.end = parse_iso_date(e);
    if (!p.end) return std::nullopt;
  }
  if (p.start.has_value() != p.end.has_value()) return std::nullopt;
  if (p.start && *p.start > *p.end) return std::nullopt;
  return p;
}

namespace {

using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;

constexpr std::array<std::string_view, 7> kWeekdays = {"sunday",   "monday", "tuesday", "wednesday",
                                                       "thursday", "friday", "saturday"};

struct MonthName {
  std::string_view name;
  unsigned number;
};
constexpr std::array<MonthName, 24> kMonths = {{
    {"january", 1}, {"february", 2}, {"march", 3},     {"april", 4},    {"may", 5},
    {"june", 6},    {"july", 7},     {"august", 8},    {"september", 9}, {"october", 10},
    {"november", 11}, {"december", 12}, {"jan", 1},    {"feb", 2},      {"mar", 3},
    {"apr", 4},     {"jun", 6},      {"jul", 7},       {"aug", 8},      {"sep", 9},
    {"sept", 9},    {"oct", 10},     {"nov", 11},      {"dec", 12},
}};

constexpr std::array<std::string_view, 11> kNumberWords = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

int weekday_index(std::string_view token) {
  for (std::size_t i = 0; i < kWeekdays.size(); ++i) {
    if (kWeekdays[i] == token) return static_cast<int>(i);
  }
  return -1;
}

unsigned month_number(std::string_view token) {
  for (const auto& m : kMonths) {
    if (m.name == token) return m.number;
  }
  return 0;
}

std::optional<int> small_number(std::string_view token) {
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (kNumberWords[i] == token) return static_cast<int>(i);
  }
  if (token == "a" || token == "an") return 1;
  if (!token.empty() && token.size() <= 3 &&
      std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::stoi(std::string(token));
  }
  return std::nullopt;
}

// "3", "3rd", "21st" -> day of month.
std::optional<unsigned> day_of_month(std::string_view token) {
  std::size_t digits = 0;
  while (digits < token.size() && token[digits] >= '0' && token[digits] <= '9') ++digits;
  if (digits == 0 || digits > 2) return std::nullopt;
  const auto suffix = token.substr(digits);
  if (!suffix.empty() && suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") {
    return std::nullopt;
  }
  const unsigned d = static_cast<unsigned>(std::stoi(std::string(token.substr(0, digits))));
  if (d < 1 || d > 31) return std::nullopt;
  return d;
}

std::optional<int> four_digit_year(std::string_view token) {
  if (token.size() != 4 || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  return std::stoi(std::string(token));
}

Date monday_of(const Date& d) {
  const unsigned c = std::chrono::weekday{sys_days{d}}.c_encoding();
  return add_days(d, -static_cast<int>((c + 6) % 7));
}

Date last_day_of_month(year y, month m) {
  return Date{std::chrono::year_month_day_last{y, std::chrono::month_day_last{m}}};
}

class Tokens {
 public:
  explicit Tokens(std::vector<std::string> t) : t_(std::move(t)) {}

  std::size_t size() const { return t_.size(); }
  std::string_view operator[](std::size_t i) const { return i < t_.size() ? std::string_view(t_[i]) : ""; }

  // Index of the first occurrence of the token sequence, or -1.
  long find(std::initializer_list<std::string_view> seq) const {
    if (seq.size() == 0 || seq.size() > t_.size()) return -1;
    for (std::size_t i = 0; i + seq.size() <= t_.size(); ++i) {
      std::size_t k = 0;
      for (auto s : seq) {
        if (t_[i + k] != s) break;
        ++k;
      }
      if (k == seq.size()) return static_cast<long>(i);
    }
    return -1;
  }
  bool has(std::initializer_list<std::string_view> seq) const { return find(seq) >= 0; }

 private:
  std::vector<std::string> t_;
};

struct Range {
  Date start;
  Date end;
};

std::optional<Range> explicit_iso_dates(const std::string& text) {
  static const std::regex kIso(R"((\d{4}-\d{2}-\d{2}))");
  std::vector<Date> found;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kIso); it != std::sregex_iterator(); ++it) {
    if (auto d = parse_iso_date((*it)[1].str())) found.push_back(*d);
  }
  if (found.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(found.begin(), found.end());
  return Range{*lo, *hi};
}

std::optional<Range> month_day(const Tokens& tk, const Date& today) {
  for (std::size_t i = 0; i < tk.size(); ++i) {
    const unsigned m = month_number(tk[i]);
    if (m == 0) continue;
    std::optional<unsigned> day;
    std::size_t year_pos = 0;
    if (auto d = day_of_month(tk[i + 1])) {
      day = d;
      year_pos = i + 2;
    } else if (i >= 1 && day_of_month(tk[i - 1])) {
      day = day_of_month(tk[i - 1]);
      year_pos = i + 1;
    } else if (i >= 2 && tk[i - 1] == "of" && day_of_month(tk[i - 2])) {
      day = day_of_month(tk[i - 2]);
      year_pos = i + 1;
    }
    if (!day) continue;
    int y = static_cast<int>(today.year());
    const bool explicit_year = four_digit_year(tk[year_pos]).has_value();
    if (explicit_year) y = *four_digit_year(tk[year_pos]);
    Date d{year{y}, month{m}, std::chrono::day{*day}};
    if (!d.ok()) continue;
    if (!explicit_year && d > today) {
      d = Date{year{y - 1}, month{m}, std::chrono::day{*day}};
      if (!d.ok()) continue;
    }
    return Range{d, d};
  }
  return std::nullopt;
}

std::optional<Range> whole_month(const Tokens& tk, const Date& today) {
  for (std::size_t i = 1; i < tk.size(); ++i) {
    const auto prev = tk[i - 1];
    if (prev != "in" && prev != "during" && prev != "last" && prev != "this") continue;
    // Only full names here; abbreviations like "mar" are too ambiguous without a day.
    unsigned m = 0;
    for (std::size_t k = 0; k < 12; ++k) {
      if (kMonths[k].name == tk[i]) m = kMonths[k].number;
    }
    if (m == 0) continue;
    int y = static_cast<int>(today.year());
    const unsigned current = static_cast<unsigned>(today.month());
    if (m > current || (prev == "last" && m == current)) --y;
    const Date start{year{y}, month{m}, std::chrono::day{1}};
    Date end = last_day_of_month(year{y}, month{m});
    if (end > today) end = today;
    return Range{start, end};
  }
  return std::nullopt;
}

std::optional<Range> relative_range(const Tokens& tk, const Date& today) {
  if (tk.has({"day", "before", "yesterday"})) return Range{add_days(today, -2), add_days(today, -2)};
  if (tk.has({"yesterday"})) return Range{add_days(today, -1), add_days(today, -1)};
  if (tk.has({"today"}) || tk.has({"tonight"}) || tk.has({"this", "morning"}) ||
      tk.has({"this", "afternoon"}) || tk.has({"this", "evening"})) {
    return Range{today, today};
  }
  if (long i = tk.find({"days", "ago"}); i >= 1) {
    if (auto n = small_number(tk[static_cast<std::size_t>(i - 1)])) {
      return Range{add_days(today, -*n), add_days(today, -*n)};
    }
  }
  if (tk.has({"last", "weekend"})) {
    const Date monday = monday_of(today);
    return Range{add_days(monday, -2), add_days(monday, -1)};
  }
  if (tk.has({"last", "week"}) || tk.has({"previous", "week"})) {
    const Date monday = add_days(monday_of(today), -7);
    return Range{monday, add_days(monday, 6)};
  }
  if (tk.has({"this", "week"})) return Range{monday_of(today), today};
  if (tk.has({"last", "month"}) || tk.has({"previous", "month"})) {
    const auto first_this = Date{today.year(), today.month(), std::chrono::day{1}};
    const Date last_prev = add_days(first_this, -1);
    return Range{Date{last_prev.year(), last_prev.month(), std::chrono::day{1}}, last_prev};
  }
  if (tk.has({"this", "month"})) return Range{Date{today.year(), today.month(), std::chrono::day{1}}, today};
  if (tk.has({"last", "year"}) || tk.has({"previous", "year"})) {
    const year y = today.year() - std::chrono::years{1};
    return Range{Date{y, month{1}, std::chrono::day{1}}, Date{y, month{12}, std::chrono::day{31}}};
  }
  if (tk.has({"this", "year"})) return Range{Date{today.year(), month{1}, std::chrono::day{1}}, today};
  for (std::size_t i = 1; i < tk.size(); ++i) {
    const int wd = weekday_index(tk[i]);
    if (wd < 0) continue;
    const auto prev = tk[i - 1];
    if (prev != "last" && prev != "on" && prev != "past") continue;
    // Most recent such weekday strictly before today.
    const int today_wd = static_cast<int>(std::chrono::weekday{sys_days{today}}.c_encoding());
    int back = (today_wd - wd + 7) % 7;
    if (back == 0) back = 7;
    const Date d = add_days(today, -back);
    return Range{d, d};
  }
  return std::nullopt;
}

bool recent_intent(const Tokens& tk) {
  return tk.has({"last", "time"}) || tk.has({"most", "recent"}) || tk.has({"most", "recently"}) ||
         tk.has({"recently"}) || tk.has({"latest"}) || tk.has({"recent"});
}

}  // namespace

TemporalParse parse_temporal_rules(const RecallQuery& query) {
  const Date today = local_date(query.asked_at, query.timezone_offset_minutes);
  std::string lowered = query.text;
  for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const Tokens tk(tokenize(lowered));

  std::optional<Range> range = explicit_iso_dates(lowered);
  if (!range) range = month_day(tk, today);
  if (!range) range = relative_range(tk, today);
  if (!range) range = whole_month(tk, today);

  TemporalParse p;
  if (range) {
    p.start = range->start;
    p.end = range->end;
  }
  p.recent = recent_intent(tk);
  return p;
}

std::string render_datetime_prompt(const RecallQuery& query) {
  return prompts::render(prompts::get(prompts::kDatetimeMatch),
                         {{"question", query.text},
                          {"recall_time", format_recall_time(query.asked_at, query.timezone_offset_minutes)}});
}

TemporalParseOutcome DateParser::parse(const RecallQuery& query) const {
  TemporalParseOutcome out;
  if (llm_) {
    try {
      const std::string reply = llm_->complete(render_datetime_prompt(query));
      const auto j = nlohmann::json::parse(extract_json_object(reply), nullptr, false);
      if (auto parsed = temporal_parse_from_json(j)) {
        out.parse = *parsed;
        out.used_llm = true;
        return out;
      }
      out.warnings.push_back("malformed datetime parser reply; using rule parser");
    } catch (const Error& e) {
      out.warnings.push_back(std::string("datetime parser unavailable (") + e.what() + "); using rule parser");
    }
    log::warn(out.warnings.back());
  }
  out.parse = parse_temporal_rules(query);
  return out;
}

void validate(const DecayConstants& c) {
  if (!(c.short_seconds > 0.0 && c.short_seconds < c.mid_seconds && c.mid_seconds < c.long_seconds)) {
    throw Error(ErrorCode::kInvalidArgument, "decay constants must satisfy 0 < short < mid < long");
  }
}

double date_match_score(const MemoryEntry& memory, const TemporalParse& parse, int tz_offset_minutes) {
  if (!parse.has_range()) return 0.0;
  const Date d = local_date(memory.created_at, tz_offset_minutes);
  return (*parse.start <= d && d <= *parse.end) ? 1.0 : 0.0;
}

double recency_score(double delta_seconds, bool recent, const DecayConstants& c) {
  if (delta_seconds < 0.0) throw Error(ErrorCode::kNegativeInterval, "memory is newer than the query");
  if (!recent) return 0.0;
  return (std::exp(-delta_seconds / c.short_seconds) + std::exp(-delta_seconds / c.mid_seconds) +
          std::exp(-delta_seconds / c.long_seconds)) /
         3.0;
}

double recency_score(const MemoryEntry& memory, const RecallQuery& query, const TemporalParse& parse,
                     const DecayConstants& constants) {
  if (query.asked_at < memory.created_at) {
    throw Error(ErrorCode::kNegativeInterval, memory.id + " was created after the query time");
  }
  return recency_score(static_cast<double>(query.asked_at - memory.created_at), parse.recent, constants);
}

}  // namespace memqa
