#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace burden {

// Calendar day. All signal series are keyed by local (region) dates.
using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

// Closed interval of dates.
struct DateRange {
  Date start;
  Date end;

  bool contains(Date d) const { return start <= d && d <= end; }
  int days() const { return static_cast<int>((end - start).count()) + 1; }
};

// Parses "YYYY-MM-DD". Throws std::invalid_argument on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date d);

// Parses an RFC 3339 timestamp ("2020-03-01T10:15:00Z", "...+05:30",
// optional fractional seconds which are truncated). Throws
// std::invalid_argument.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp ts);

// Local calendar date of a UTC instant under a fixed UTC offset.
Date local_date(Timestamp ts, int utc_offset_minutes);

inline Date add_days(Date d, int n) { return d + std::chrono::days{n}; }
inline int days_between(Date from, Date to) {
  return static_cast<int>((to - from).count());
}

}  // namespace burden
