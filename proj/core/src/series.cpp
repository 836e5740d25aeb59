#include "burden/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "csv_util.hpp"

namespace burden {

std::string_view to_string(SignalKind kind) {
  return kind == SignalKind::keyword_count ? "keyword_count" : "volume";
}

SignalKind parse_signal_kind(std::string_view text) {
  text = detail::trim(text);
  if (text == "keyword_count") return SignalKind::keyword_count;
  if (text == "volume") return SignalKind::volume;
  throw std::invalid_argument("unknown signal kind '" + std::string(text) +
                              "'");
}

std::optional<std::size_t> DailySeries::index_of(Date d) const {
  const int offset = days_between(start, d);
  if (offset < 0 || static_cast<std::size_t>(offset) >= values.size()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(offset);
}

std::optional<std::size_t> CaseSeries::index_of(Date d) const {
  const int offset = days_between(start, d);
  if (offset < 0 || static_cast<std::size_t>(offset) >= values.size()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(offset);
}

void check_series(const DailySeries& series) {
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double v = series.values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("series " + series.region + "/" +
                                  std::string(to_string(series.kind)) +
                                  " has invalid value at " +
                                  format_date(series.date_at(i)));
    }
  }
}

void write_series_csv(const std::vector<DailySeries>& series,
                      const std::filesystem::path& path) {
  auto out = detail::open_output(path.string());
  out << "region,kind,date,value\n";
  for (const auto& s : series) {
    const std::string prefix =
        detail::csv_escape(s.region) + "," + std::string(to_string(s.kind)) +
        ",";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      out << prefix << format_date(s.date_at(i)) << ','
          << detail::format_double(s.values[i]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

std::vector<DailySeries> read_series_csv(const std::filesystem::path& path,
                                         bool require_non_negative) {
  auto in = detail::open_input(path.string(), "series CSV");
  std::vector<DailySeries> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (line_no == 1 && !f.empty() && f[0] == "region") continue;
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (f.size() != 4) throw std::runtime_error(where + "expected 4 fields");
    try {
      const SignalKind kind = parse_signal_kind(f[1]);
      const Date date = parse_date(detail::trim(f[2]));
      const double value = detail::parse_double(f[3], "value");
      auto it = std::find_if(result.begin(), result.end(), [&](const auto& s) {
        return s.region == f[0] && s.kind == kind;
      });
      if (it == result.end()) {
        DailySeries s;
        s.region = f[0];
        s.kind = kind;
        s.start = date;
        result.push_back(std::move(s));
        it = std::prev(result.end());
      } else if (date != add_days(it->end(), 1)) {
        throw std::invalid_argument("date " + format_date(date) +
                                    " does not follow " +
                                    format_date(it->end()));
      }
      if (!std::isfinite(value)) {
        throw std::invalid_argument("value must be finite");
      }
      if (require_non_negative && value < 0.0) {
        throw std::invalid_argument("value must be non-negative");
      }
      it->values.push_back(value);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  return result;
}

std::map<std::string, CaseSeries> read_cases_csv(
    const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "case CSV");
  std::map<std::string, std::vector<std::pair<Date, double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (line_no == 1 && !f.empty() && f[0] == "region") continue;
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (f.size() != 3) throw std::runtime_error(where + "expected 3 fields");
    try {
      const Date date = parse_date(detail::trim(f[1]));
      const long long cases = detail::parse_int(f[2], "new_cases");
      if (cases < 0) throw std::invalid_argument("negative case count");
      rows[std::string(detail::trim(f[0]))].emplace_back(
          date, static_cast<double>(cases));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  std::map<std::string, CaseSeries> out;
  for (auto& [region, entries] : rows) {
    std::sort(entries.begin(), entries.end());
    CaseSeries cs;
    cs.region = region;
    cs.start = entries.front().first;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].first != cs.date_at(i)) {
        throw std::runtime_error(path.string() + ": cases for " + region +
                                 " are not on consecutive dates near " +
                                 format_date(entries[i].first));
      }
      cs.values.push_back(entries[i].second);
    }
    out.emplace(region, std::move(cs));
  }
  return out;
}

}  // namespace burden
