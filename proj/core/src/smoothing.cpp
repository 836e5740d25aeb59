#include "burden/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
  }
}

std::string format_param(double v) { return detail::format_double(v); }

}  // namespace

SmoothingSpec SmoothingSpec::ma(int n) {
  if (n < 1) throw std::invalid_argument("moving-average window must be >= 1");
  return {Kind::moving_average, n, 0.0, 0.0};
}

SmoothingSpec SmoothingSpec::ses(double alpha) {
  check_unit(alpha, "alpha");
  return {Kind::exponential, 0, alpha, 0.0};
}

SmoothingSpec SmoothingSpec::holt(double alpha, double beta) {
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  return {Kind::holt, 0, alpha, beta};
}

std::string SmoothingSpec::to_string() const {
  switch (kind) {
    case Kind::moving_average:
      return "MA(" + std::to_string(window) + ")";
    case Kind::exponential:
      return "SES(" + format_param(alpha) + ")";
    case Kind::holt:
      return "Holt(" + format_param(alpha) + "," + format_param(beta) + ")";
  }
  return {};
}

SmoothingSpec SmoothingSpec::parse(std::string_view text) {
  text = detail::trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw std::invalid_argument("bad smoothing spec '" + std::string(text) +
                                "'");
  }
  const std::string_view name = detail::trim(text.substr(0, open));
  const std::string_view args = text.substr(open + 1, text.size() - open - 2);
  const auto comma = args.find(',');
  if (name == "MA" && comma == std::string_view::npos) {
    return ma(static_cast<int>(detail::parse_int(args, "MA window")));
  }
  if (name == "SES" && comma == std::string_view::npos) {
    return ses(detail::parse_double(args, "SES alpha"));
  }
  if (name == "Holt" && comma != std::string_view::npos) {
    return holt(detail::parse_double(args.substr(0, comma), "Holt alpha"),
                detail::parse_double(args.substr(comma + 1), "Holt beta"));
  }
  throw std::invalid_argument("bad smoothing spec '" + std::string(text) + "'");
}

std::vector<SmoothingSpec> parse_smoothing_grid(std::string_view text) {
  std::vector<SmoothingSpec> grid;
  std::size_t pos = 0;
  while (pos < text.size()) {
    // Commas inside parentheses belong to the spec.
    int depth = 0;
    std::size_t end = pos;
    for (; end < text.size(); ++end) {
      if (text[end] == '(') ++depth;
      if (text[end] == ')') --depth;
      if (text[end] == ',' && depth == 0) break;
    }
    const auto item = detail::trim(text.substr(pos, end - pos));
    if (!item.empty()) grid.push_back(SmoothingSpec::parse(item));
    pos = end + 1;
  }
  if (grid.empty()) throw std::invalid_argument("empty smoothing grid");
  return grid;
}

std::vector<SmoothingSpec> default_grid() {
  return {SmoothingSpec::ma(3), SmoothingSpec::ma(4), SmoothingSpec::ma(5),
          SmoothingSpec::ses(0.3), SmoothingSpec::holt(0.3, 0.1)};
}

std::vector<SmoothingSpec> extended_grid() {
  const double values[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<SmoothingSpec> grid;
  for (int n = 3; n <= 7; ++n) grid.push_back(SmoothingSpec::ma(n));
  for (double a : values) grid.push_back(SmoothingSpec::ses(a));
  for (double a : values) {
    for (double b : values) grid.push_back(SmoothingSpec::holt(a, b));
  }
  return grid;
}

DailySeries moving_average(const DailySeries& series, int n) {
  if (n < 1) throw std::invalid_argument("moving-average window must be >= 1");
  DailySeries out = series;
  const auto& y = series.values;
  const auto w = static_cast<std::size_t>(n);
  for (std::size_t t = 0; t < y.size(); ++t) {
    const std::size_t first = t + 1 >= w ? t + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t i = first; i <= t; ++i) sum += y[i];
    out.values[t] = sum / static_cast<double>(t - first + 1);
  }
  return out;
}

DailySeries exp_smooth(const DailySeries& series, double alpha) {
  check_unit(alpha, "alpha");
  DailySeries out = series;
  const auto& y = series.values;
  for (std::size_t t = 1; t < y.size(); ++t) {
    out.values[t] = alpha * y[t] + (1.0 - alpha) * out.values[t - 1];
  }
  return out;
}

DailySeries holt_smooth(const DailySeries& series, double alpha, double beta) {
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  const auto& y = series.values;
  if (y.size() < 2) {
    throw std::invalid_argument("Holt smoothing needs at least two points");
  }
  DailySeries out = series;
  double level = y[0];
  double trend = y[1] - y[0];
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double prev = level;
    level = alpha * y[t] + (1.0 - alpha) * (prev + trend);
    trend = beta * (level - prev) + (1.0 - beta) * trend;
    out.values[t] = level;
  }
  return out;
}

DailySeries smooth(const DailySeries& series, const SmoothingSpec& spec) {
  switch (spec.kind) {
    case SmoothingSpec::Kind::moving_average:
      return moving_average(series, spec.window);
    case SmoothingSpec::Kind::exponential:
      return exp_smooth(series, spec.alpha);
    case SmoothingSpec::Kind::holt:
      return holt_smooth(series, spec.alpha, spec.beta);
  }
  throw std::logic_error("unhandled smoothing kind");
}

CorrelationInput align(const DailySeries& signal, const CaseSeries& cases,
                       int lag) {
  CorrelationInput in;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const auto j = cases.index_of(add_days(signal.date_at(i), lag));
    if (!j) continue;
    in.signal.push_back(signal.values[i]);
    in.cases.push_back(cases.values[*j]);
  }
  return in;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("pearson inputs differ in length");
  }
  const std::size_t n = a.size();
  if (n < 3) {
    throw std::invalid_argument("correlation needs at least 3 shared days, got " +
                                std::to_string(n));
  }
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw std::invalid_argument("undefined correlation: zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double pearson(const DailySeries& signal, const CaseSeries& cases, int lag) {
  const auto in = align(signal, cases, lag);
  return pearson(in.signal, in.cases);
}

SelectionReport select_model(const DailySeries& series,
                             const CaseSeries& cases,
                             const std::vector<SmoothingSpec>& candidates,
                             int lag) {
  if (candidates.empty()) {
    throw std::invalid_argument("no smoothing candidates");
  }
  SelectionReport report;
  report.region = series.region;
  report.lag = lag;
  report.overlap_days = static_cast<int>(align(series, cases, lag).signal.size());
  if (report.overlap_days < 3) {
    throw std::invalid_argument(
        "signal and cases share " + std::to_string(report.overlap_days) +
        " days; need at least 3");
  }
  bool have_winner = false;
  for (const auto& spec : candidates) {
    CandidateResult row{spec, std::nullopt, {}};
    try {
      row.r = pearson(smooth(series, spec), cases, lag);
      if (!have_winner || *row.r > report.winner_r) {
        report.winner = spec;
        report.winner_r = *row.r;
        have_winner = true;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.candidates.push_back(std::move(row));
  }
  if (!have_winner) {
    throw std::runtime_error("every smoothing candidate failed: " +
                             report.candidates.front().error);
  }
  return report;
}

std::string to_json(const SelectionReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["region"] = report.region;
  j["status"] = "selected";
  j["winner"] = report.winner.to_string();
  j["winner_r"] = report.winner_r;
  j["overlap_days"] = report.overlap_days;
  j["lag"] = report.lag;
  ordered_json rows = ordered_json::array();
  for (const auto& c : report.candidates) {
    ordered_json row;
    row["spec"] = c.spec.to_string();
    row["r"] = c.r ? ordered_json(*c.r) : ordered_json(nullptr);
    if (!c.error.empty()) row["error"] = c.error;
    rows.push_back(std::move(row));
  }
  j["candidates"] = std::move(rows);
  return j.dump(2);
}

}  // namespace burden
