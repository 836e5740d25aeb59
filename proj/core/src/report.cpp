#include "burden/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "burden/scoring.hpp"
#include "csv_util.hpp"

namespace burden {

namespace {

constexpr const char* kPalette[] = {"#9e9e9e", "#1f77b4", "#d62728",
                                    "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, at least `raw`.
double nice_step(double raw) {
  double p = 1.0;
  while (p * 10.0 <= raw) p *= 10.0;
  while (p > raw && p > 1e-9) p /= 10.0;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (p * m >= raw) return p * m;
  }
  return p * 10.0;
}

}  // namespace

std::vector<EventAnnotation> load_events(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "event file");
  std::vector<EventAnnotation> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto f = detail::split_csv_line(line);
    if (line_no == 1 && !f.empty() && detail::trim(f[0]) == "date") continue;
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (f.size() != 3) throw std::runtime_error(where + "expected 3 fields");
    EventAnnotation ev;
    try {
      ev.date = parse_date(detail::trim(f[0]));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + e.what());
    }
    ev.region = std::string(detail::trim(f[1]));
    ev.label = std::string(detail::trim(f[2]));
    if (ev.label.empty()) throw std::runtime_error(where + "empty event label");
    if (ev.region.empty()) ev.region = "ALL";
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<EventAnnotation> events_for_region(
    const std::vector<EventAnnotation>& events, const std::string& region) {
  std::vector<EventAnnotation> out;
  for (const auto& ev : events) {
    if (ev.region == "ALL" || ev.region == region) out.push_back(ev);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.date < b.date; });
  return out;
}

std::string plot_svg(const std::vector<DailySeries>& series,
                     const std::vector<std::string>& labels,
                     const std::vector<EventAnnotation>& events,
                     const PlotStyle& style) {
  for (const auto& s : series) {
    if (s.region != series.front().region) {
      throw std::invalid_argument("plotted series span regions " +
                                  series.front().region + " and " + s.region);
    }
  }
  const double W = style.width, H = style.height;
  const double left = 64, right = 180, top = 40, bottom = 56;
  const double pw = W - left - right, ph = H - top - bottom;

  Date first{}, last{};
  double ymax = 0.0;
  bool any = false;
  for (const auto& s : series) {
    if (s.empty()) continue;
    if (!any || s.start < first) first = s.start;
    if (!any || s.end() > last) last = s.end();
    any = true;
    for (double v : s.values) ymax = std::max(ymax, v);
  }
  if (ymax <= 0.0) ymax = 1.0;
  const double step = nice_step(ymax / 5.0);
  ymax = step * std::ceil(ymax / step - 1e-9);
  const int span = any ? std::max(1, days_between(first, last)) : 1;
  const auto x_of = [&](Date d) {
    return left + pw * days_between(first, d) / span;
  };
  const auto y_of = [&](double v) { return top + ph * (1.0 - v / ymax); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
      << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width
      << ' ' << style.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg << "<text x=\"" << fmt(left) << "\" y=\"22\" font-size=\"14\">"
        << xml_escape(style.title) << "</text>\n";
  }
  // Axes and horizontal grid.
  svg << "<g id=\"axes\" stroke=\"#444\" fill=\"none\">\n";
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\""
      << fmt(left + pw) << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\""
      << fmt(left) << "\" y2=\"" << fmt(top + ph) << "\"/>\n";
  svg << "</g>\n<g id=\"yticks\">\n";
  for (double v = 0.0; v <= ymax + 1e-9; v += step) {
    const double y = y_of(v);
    svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(left + pw) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << detail::format_double(v) << "</text>\n";
  }
  svg << "</g>\n<g id=\"xticks\">\n";
  if (any) {
    const int tick_every = std::max(1, (span + 7) / 8);
    for (int d = 0; d <= span; d += tick_every) {
      const Date date = add_days(first, d);
      const double x = x_of(date);
      svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + ph)
          << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(top + ph + 4)
          << "\" stroke=\"#444\"/>\n";
      svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + ph + 18)
          << "\" text-anchor=\"middle\">" << format_date(date) << "</text>\n";
    }
  }
  svg << "</g>\n<g id=\"events\">\n";
  for (const auto& ev : events) {
    if (!any || ev.date < first || ev.date > last) continue;
    const double x = x_of(ev.date);
    svg << "<line class=\"event\" x1=\"" << fmt(x) << "\" y1=\"" << fmt(top)
        << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(top + ph)
        << "\" stroke=\"#555\" stroke-dasharray=\"4,3\"/>\n";
    svg << "<text x=\"" << fmt(x + 3) << "\" y=\"" << fmt(top + 10)
        << "\" transform=\"rotate(90 " << fmt(x + 3) << ' ' << fmt(top + 10)
        << ")\" fill=\"#555\">" << xml_escape(ev.label) << "</text>\n";
  }
  svg << "</g>\n<g id=\"series\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.empty()) continue;
    svg << "<polyline stroke=\"" << kPalette[i % std::size(kPalette)]
        << "\" points=\"";
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (t) svg << ' ';
      svg << fmt(x_of(s.date_at(t))) << ',' << fmt(y_of(s.values[t]));
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n<g id=\"legend\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = top + 14 + 18 * static_cast<double>(i);
    const double x = left + pw + 16;
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(x + 22) << "\" y2=\"" << fmt(y) << "\" stroke=\""
        << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n";
    const std::string label = i < labels.size()
                                  ? labels[i]
                                  : std::string(to_string(series[i].kind));
    svg << "<text x=\"" << fmt(x + 28) << "\" y=\"" << fmt(y + 4) << "\">"
        << xml_escape(label) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void render_plot(const std::vector<DailySeries>& series,
                 const std::vector<std::string>& labels,
                 const std::vector<EventAnnotation>& events,
                 const std::filesystem::path& out, const PlotStyle& style) {
  const std::string svg = plot_svg(series, labels, events, style);
  auto file = detail::open_output(out.string());
  file << svg;
  if (!file) throw std::runtime_error("write failed: '" + out.string() + "'");
}

std::vector<RankedTweet> top_tweets_for_date(
    const TweetCorpus& corpus, std::span<const TokenizedTweet> tokens,
    const KeywordSet& keywords, Date date, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::unordered_map<std::string_view, const TweetRecord*> by_id;
  for (const auto& rec : corpus.records) by_id.emplace(rec.id, &rec);
  const KeywordMatcher matcher(keywords);
  std::vector<RankedTweet> ranked;
  for (const auto& t : tokens) {
    if (t.date != date) continue;
    const auto it = by_id.find(t.source_id);
    if (it == by_id.end()) continue;
    const std::size_t hits = matcher.count(t.tokens);
    if (hits == 0) continue;
    ranked.push_back({*it->second, hits});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.hits != b.hits) return a.hits > b.hits;
    return std::tie(a.record.timestamp, a.record.id) <
           std::tie(b.record.timestamp, b.record.id);
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace burden
