#include "burden/truncation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace burden {

namespace {

struct WindowStats {
  int n = 0;
  double mean = 0.0;
  double var = 0.0;  // sample variance, 0 for n < 2
};

WindowStats window_stats(const std::vector<double>& v, std::size_t begin,
                         std::size_t end) {
  WindowStats s;
  s.n = static_cast<int>(end - begin);
  if (s.n == 0) return s;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += v[i];
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      ss += (v[i] - s.mean) * (v[i] - s.mean);
    }
    s.var = ss / (s.n - 1);
  }
  return s;
}

double welch_t(const WindowStats& pre, const WindowStats& post) {
  const double diff = post.mean - pre.mean;
  const double se = std::sqrt(pre.var / pre.n + post.var / post.n);
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::optional<std::size_t> scan_boundary(const DailySeries& series,
                                         int window) {
  if (window < 1) throw std::invalid_argument("scan window must be >= 1");
  const auto k = static_cast<std::size_t>(window);
  const auto& v = series.values;
  std::optional<std::size_t> best;
  double best_ratio = 0.0;
  for (std::size_t b = k; b + k <= v.size(); ++b) {
    const double pre = window_stats(v, b - k, b).mean;
    if (pre <= 0.0) continue;
    const double ratio = window_stats(v, b, b + k).mean / pre;
    if (!best || ratio > best_ratio) {
      best = b;
      best_ratio = ratio;
    }
  }
  return best;
}

BoundaryReport detect_boundary(const DailySeries& series,
                               const DetectOptions& options) {
  if (options.window < 1) throw std::invalid_argument("window must be >= 1");
  if (series.size() < 9) {
    throw std::invalid_argument("series of " + std::to_string(series.size()) +
                                " days is too short; need at least 9");
  }
  BoundaryReport report;
  report.region = series.region;
  report.kind = series.kind;

  std::size_t b;
  if (series.scrape_date) {
    if (!series.index_of(*series.scrape_date)) {
      throw std::invalid_argument("scrape date " +
                                  format_date(*series.scrape_date) +
                                  " lies outside the series");
    }
    report.boundary_date = add_days(*series.scrape_date, -(kFullVolumeDays - 1));
    const auto idx = series.index_of(report.boundary_date);
    if (!idx || *idx == 0) {
      throw std::invalid_argument(
          "series has no day before the truncation boundary " +
          format_date(report.boundary_date));
    }
    b = *idx;
  } else {
    report.anchored = false;
    const auto found = scan_boundary(series, options.scan_window);
    if (!found) {
      throw std::invalid_argument(
          "no scrape date and no boundary found by scanning");
    }
    b = *found;
    report.boundary_date = series.date_at(b);
  }

  const auto k = static_cast<std::size_t>(options.window);
  const std::size_t pre_begin = b >= k ? b - k : 0;
  const std::size_t post_end = std::min(
      {series.size(), b + k, b + static_cast<std::size_t>(kFullVolumeDays)});
  const auto pre = window_stats(series.values, pre_begin, b);
  const auto post = window_stats(series.values, b, post_end);
  report.pre_days = pre.n;
  report.post_days = post.n;
  report.pre_mean = pre.mean;
  report.post_mean = post.mean;
  report.t_statistic = welch_t(pre, post);

  if (pre.mean <= 0.0) {
    if (post.mean > 0.0) {
      report.degenerate = true;
      report.note = "zero mean before boundary; scale undefined, not adjusted";
    } else {
      report.note = "no signal on either side of boundary";
    }
    return report;
  }
  const double ratio = post.mean / pre.mean;
  report.confidence = ratio;
  if (ratio < options.min_ratio) {
    report.note = "no visible truncation";
  } else if (report.t_statistic < options.min_t) {
    report.note = "ratio within noise; no visible truncation";
  } else {
    report.truncation_detected = true;
    report.scale_factor = ratio;
    report.note = "truncation detected";
  }
  return report;
}

DailySeries adjust(const DailySeries& series, const BoundaryReport& report) {
  if (series.region != report.region || series.kind != report.kind) {
    throw std::invalid_argument(
        "boundary report for " + report.region + "/" +
        std::string(to_string(report.kind)) + " applied to series " +
        series.region + "/" + std::string(to_string(series.kind)));
  }
  DailySeries out = series;
  if (!report.truncation_detected || report.degenerate ||
      !report.scale_factor) {
    return out;
  }
  const double scale = *report.scale_factor;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.date_at(i) >= report.boundary_date) break;
    out.values[i] *= scale;
  }
  return out;
}

std::string to_json(const BoundaryReport& r) {
  using nlohmann::ordered_json;
  const auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["region"] = r.region;
  j["kind"] = to_string(r.kind);
  j["boundary_date"] = format_date(r.boundary_date);
  j["anchored"] = r.anchored;
  j["pre_days"] = r.pre_days;
  j["post_days"] = r.post_days;
  j["pre_mean"] = r.pre_mean;
  j["post_mean"] = r.post_mean;
  j["confidence"] = opt(r.confidence);
  j["t_statistic"] = std::isfinite(r.t_statistic)
                         ? ordered_json(r.t_statistic)
                         : ordered_json(r.t_statistic > 0 ? "inf" : "-inf");
  j["truncation_detected"] = r.truncation_detected;
  j["degenerate"] = r.degenerate;
  j["scale_factor"] = opt(r.scale_factor);
  j["note"] = r.note;
  return j.dump(2);
}

}  // namespace burden
