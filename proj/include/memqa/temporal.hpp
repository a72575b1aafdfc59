#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "memqa/backend.hpp"
#include "memqa/calendar.hpp"
#include "memqa/types.hpp"

namespace memqa {

// Search range (T_s, T_e) over local calendar days, closed on both ends, and
// the recent-intent flag B_r.
struct TemporalParse {
  std::optional<Date> start;
  std::optional<Date> end;
  bool recent = false;

  bool has_range() const noexcept { return start.has_value(); }
  bool operator==(const TemporalParse&) const = default;
};

// Throws kInvalidArgument unless start/end are both set (start <= end) or both empty.
void validate(const TemporalParse& parse);

// {"search_start_date","search_end_date","search_recent"}; empty dates are "".
nlohmann::ordered_json to_json(const TemporalParse& parse);
// Strict: all three keys with the right types, valid dates, valid range.
std::optional<TemporalParse> temporal_parse_from_json(const nlohmann::json& j);

// Deterministic parser for common English temporal cues.
TemporalParse parse_temporal_rules(const RecallQuery& query);

std::string render_datetime_prompt(const RecallQuery& query);

struct TemporalParseOutcome {
  TemporalParse parse;
  bool used_llm = false;
  std::vector<std::string> warnings;
};

// LLM-backed when a backend is given, otherwise rule-based. Backend failures
// and malformed replies fall back to the rules with a warning.
class DateParser {
 public:
  explicit DateParser(std::shared_ptr<TextBackend> llm = nullptr) : llm_(std::move(llm)) {}
  TemporalParseOutcome parse(const RecallQuery& query) const;

 private:
  std::shared_ptr<TextBackend> llm_;
};

struct DecayConstants {
  double short_seconds = 3.0 * 86400.0;
  double mid_seconds = 90.0 * 86400.0;
  double long_seconds = 365.0 * 86400.0;
};

void validate(const DecayConstants& c);

// R_t: 1 iff the range is non-empty and the memory's local date lies in it.
double date_match_score(const MemoryEntry& memory, const TemporalParse& parse, int tz_offset_minutes);

// R_r = B_r * (e^{-d/Qs} + e^{-d/Qm} + e^{-d/Ql}) / 3 with d = T_q - T_i.
// Throws kNegativeInterval when the memory is newer than the query.
double recency_score(const MemoryEntry& memory, const RecallQuery& query, const TemporalParse& parse,
                     const DecayConstants& constants = {});
double recency_score(double delta_seconds, bool recent, const DecayConstants& constants = {});

}  // namespace memqa
