#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burden/series.hpp"

namespace burden {

// MA(n) | SES(alpha) | Holt(alpha, beta).
struct SmoothingSpec {
  enum class Kind { moving_average, exponential, holt };
  Kind kind = Kind::moving_average;
  int window = 0;
  double alpha = 0.0;
  double beta = 0.0;

  static SmoothingSpec ma(int n);
  static SmoothingSpec ses(double alpha);
  static SmoothingSpec holt(double alpha, double beta);

  // "MA(5)", "SES(0.3)", "Holt(0.3,0.1)"; parse accepts the same forms
  // with optional spaces and validates ranges.
  std::string to_string() const;
  static SmoothingSpec parse(std::string_view text);

  bool operator==(const SmoothingSpec&) const = default;
};

// Comma-separated list of specs ("MA(3), SES(0.3), Holt(0.3,0.1)").
std::vector<SmoothingSpec> parse_smoothing_grid(std::string_view text);

// MA(3), MA(4), MA(5), SES(0.3), Holt(0.3,0.1).
std::vector<SmoothingSpec> default_grid();
// MA(3..7), SES over {0.1,0.3,0.5,0.7,0.9}, Holt over the same values for
// both constants.
std::vector<SmoothingSpec> extended_grid();

// Trailing mean over n days; the first n-1 points average the available
// prefix. Throws std::invalid_argument for n < 1.
DailySeries moving_average(const DailySeries& series, int n);

// s0 = y0, s_t = alpha y_t + (1 - alpha) s_{t-1}. alpha in (0, 1].
DailySeries exp_smooth(const DailySeries& series, double alpha);

// Level l0 = y0, trend b0 = y1 - y0, then
//   l_t = alpha y_t + (1 - alpha)(l_{t-1} + b_{t-1})
//   b_t = beta (l_t - l_{t-1}) + (1 - beta) b_{t-1}
// and the output is the level. Needs at least two points.
DailySeries holt_smooth(const DailySeries& series, double alpha, double beta);

DailySeries smooth(const DailySeries& series, const SmoothingSpec& spec);

struct CorrelationInput {
  std::vector<double> signal;
  std::vector<double> cases;
};

// Values of both series on their common dates. With lag L, signal day d is
// paired with the cases of day d + L.
CorrelationInput align(const DailySeries& signal, const CaseSeries& cases,
                       int lag = 0);

// Sample Pearson correlation over the aligned overlap. Throws
// std::invalid_argument for fewer than 3 shared days or "undefined
// correlation" when either side is constant.
double pearson(const DailySeries& signal, const CaseSeries& cases, int lag = 0);
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct CandidateResult {
  SmoothingSpec spec;
  std::optional<double> r;
  std::string error;
};

struct SelectionReport {
  std::string region;
  std::vector<CandidateResult> candidates;
  SmoothingSpec winner;
  double winner_r = 0.0;
  int overlap_days = 0;
  int lag = 0;
};

// Smooths with each candidate and keeps the largest r; ties go to the
// earlier candidate. Throws std::invalid_argument on an empty candidate
// list and std::runtime_error when every candidate fails.
SelectionReport select_model(const DailySeries& series,
                             const CaseSeries& cases,
                             const std::vector<SmoothingSpec>& candidates,
                             int lag = 0);

std::string to_json(const SelectionReport& report);

}  // namespace burden
