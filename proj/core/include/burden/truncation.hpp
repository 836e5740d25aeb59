#pragma once

#include <optional>
#include <string>

#include "burden/series.hpp"

namespace burden {

struct DetectOptions {
  // Days averaged on each side of the boundary. The post side holds at most
  // the seven full-volume days.
  int window = 7;
  // post/pre ratios below this are reported as "no visible truncation".
  double min_ratio = 1.05;
  // Welch t statistic of post vs pre window required on top of min_ratio.
  double min_t = 3.5;
  // Window of the change-point scan used when the scrape date is unknown.
  int scan_window = 3;
};

struct BoundaryReport {
  std::string region;
  SignalKind kind = SignalKind::keyword_count;
  // First full-volume day; scrape_date - 6 when anchored.
  Date boundary_date{};
  bool anchored = true;
  int pre_days = 0;
  int post_days = 0;
  double pre_mean = 0.0;
  double post_mean = 0.0;
  // post_mean / pre_mean; empty when pre_mean is zero.
  std::optional<double> confidence;
  double t_statistic = 0.0;
  bool truncation_detected = false;
  // Non-zero recent week over an all-zero history: scale undefined.
  bool degenerate = false;
  // Set only when truncation was detected.
  std::optional<double> scale_factor;
  std::string note;
};

// Days before this many days of a scrape lack full volume.
inline constexpr int kFullVolumeDays = 7;

// Anchors the boundary at scrape_date - 6 (or scans for the largest jump
// between adjacent scan_window means when the series has no scrape date)
// and compares window means on each side. Throws std::invalid_argument for
// series shorter than 9 days, a scrape date outside the series, or no day
// before the boundary.
BoundaryReport detect_boundary(const DailySeries& series,
                               const DetectOptions& options = {});

// Index of the first day after the largest ratio of adjacent `window`-day
// means, or nullopt when no position has a non-zero preceding mean.
std::optional<std::size_t> scan_boundary(const DailySeries& series,
                                         int window);

// Multiplies values dated before the boundary by the report's scale factor.
// Reports without detected truncation give the identity. Throws
// std::invalid_argument when region or kind differ from the report.
DailySeries adjust(const DailySeries& series, const BoundaryReport& report);

// Pretty-printed JSON object.
std::string to_json(const BoundaryReport& report);

}  // namespace burden
