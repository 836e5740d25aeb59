#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burden/dates.hpp"

namespace burden {

enum class SignalKind { keyword_count, volume };

std::string_view to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view text);

// Contiguous daily values starting at `start`; a missing day is an explicit
// zero.
struct DailySeries {
  std::string region;
  SignalKind kind = SignalKind::keyword_count;
  Date start{};
  std::vector<double> values;
  std::optional<Date> scrape_date;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  Date date_at(std::size_t i) const {
    return add_days(start, static_cast<int>(i));
  }
  // Last date; only meaningful for a non-empty series.
  Date end() const { return date_at(values.size() - 1); }
  std::optional<std::size_t> index_of(Date d) const;
};

// Daily confirmed cases; values are non-negative integers.
struct CaseSeries {
  std::string region;
  Date start{};
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  Date date_at(std::size_t i) const {
    return add_days(start, static_cast<int>(i));
  }
  std::optional<std::size_t> index_of(Date d) const;
};

// Throws std::invalid_argument on a negative or non-finite value.
void check_series(const DailySeries& series);

// CSV "region,kind,date,value" with a header row; several series may share
// one file.
void write_series_csv(const std::vector<DailySeries>& series,
                      const std::filesystem::path& path);
// Groups rows by (region, kind) in order of first appearance. Dates inside a
// group must be consecutive. Smoothed output (Holt can undershoot zero) is
// read with require_non_negative = false.
std::vector<DailySeries> read_series_csv(const std::filesystem::path& path,
                                         bool require_non_negative = true);

// CSV "region,date,new_cases" with a header row. Dates per region must be
// consecutive once sorted.
std::map<std::string, CaseSeries> read_cases_csv(
    const std::filesystem::path& path);

}  // namespace burden
