#include "burden/dates.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace burden {

namespace {

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width,
                std::string_view what) {
  if (pos + width > text.size()) {
    throw std::invalid_argument("truncated " + std::string(what) + " in '" +
                                std::string(text) + "'");
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw std::invalid_argument("bad " + std::string(what) + " in '" +
                                  std::string(text) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument("expected '" + std::string(1, c) +
                                "' at offset " + std::to_string(pos) +
                                " in '" + std::string(text) + "'");
  }
}

Date make_date(int y, int m, int d, std::string_view text) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw std::invalid_argument("invalid calendar date '" + std::string(text) +
                                "'");
  }
  return sys_days{ymd};
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10) {
    throw std::invalid_argument("expected YYYY-MM-DD, got '" +
                                std::string(text) + "'");
  }
  const int y = parse_fixed(text, 0, 4, "year");
  expect_char(text, 4, '-');
  const int m = parse_fixed(text, 5, 2, "month");
  expect_char(text, 7, '-');
  const int d = parse_fixed(text, 8, 2, "day");
  return make_date(y, m, d, text);
}

std::string format_date(Date d) {
  using namespace std::chrono;
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 20) {
    throw std::invalid_argument("timestamp too short: '" + std::string(text) +
                                "'");
  }
  const Date date = parse_date(text.substr(0, 10));
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
    throw std::invalid_argument("expected 'T' separator in '" +
                                std::string(text) + "'");
  }
  const int hh = parse_fixed(text, 11, 2, "hour");
  expect_char(text, 13, ':');
  const int mm = parse_fixed(text, 14, 2, "minute");
  expect_char(text, 16, ':');
  const int ss = parse_fixed(text, 17, 2, "second");
  if (hh > 23 || mm > 59 || ss > 60) {
    throw std::invalid_argument("time out of range in '" + std::string(text) +
                                "'");
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits) {
      throw std::invalid_argument("empty fraction in '" + std::string(text) +
                                  "'");
    }
  }
  if (pos >= text.size()) {
    throw std::invalid_argument("missing UTC offset in '" + std::string(text) +
                                "'");
  }
  int offset_minutes = 0;
  const char z = text[pos];
  if (z == 'Z' || z == 'z') {
    ++pos;
  } else if (z == '+' || z == '-') {
    const int oh = parse_fixed(text, pos + 1, 2, "offset hour");
    expect_char(text, pos + 3, ':');
    const int om = parse_fixed(text, pos + 4, 2, "offset minute");
    if (oh > 23 || om > 59) {
      throw std::invalid_argument("offset out of range in '" +
                                  std::string(text) + "'");
    }
    offset_minutes = (oh * 60 + om) * (z == '-' ? -1 : 1);
    pos += 6;
  } else {
    throw std::invalid_argument("bad UTC offset in '" + std::string(text) +
                                "'");
  }
  if (pos != text.size()) {
    throw std::invalid_argument("trailing characters in '" + std::string(text) +
                                "'");
  }
  return Timestamp{date} + hours{hh} + minutes{mm} + seconds{ss} -
         minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  const Date d = floor<days>(ts);
  const hh_mm_ss<seconds> tod{ts - Timestamp{d}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "T%02d:%02d:%02dZ",
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return format_date(d) + buf;
}

Date local_date(Timestamp ts, int utc_offset_minutes) {
  return std::chrono::floor<std::chrono::days>(
      ts + std::chrono::minutes{utc_offset_minutes});
}

}  // namespace burden
