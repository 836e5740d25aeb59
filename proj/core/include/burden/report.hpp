#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "burden/corpus.hpp"
#include "burden/keywords.hpp"
#include "burden/series.hpp"
#include "burden/text.hpp"

namespace burden {

struct EventAnnotation {
  Date date{};
  std::string label;
  std::string region;  // region code or "ALL"
};

// CSV "date,region,label" with a header row. Throws std::runtime_error on an
// empty label or a bad date.
std::vector<EventAnnotation> load_events(const std::filesystem::path& path);

// Events that apply to `region` (its own and "ALL"), sorted by date.
std::vector<EventAnnotation> events_for_region(
    const std::vector<EventAnnotation>& events, const std::string& region);

struct PlotStyle {
  std::string title;
  int width = 960;
  int height = 420;
};

// Static SVG: date axis, one polyline per series, a dashed vertical line
// with a label for each event inside the date range, and a legend. Output
// is a pure function of the inputs. Throws std::invalid_argument when the
// series do not share a region.
std::string plot_svg(const std::vector<DailySeries>& series,
                     const std::vector<std::string>& labels,
                     const std::vector<EventAnnotation>& events,
                     const PlotStyle& style = {});

// Writes plot_svg to `out`. Throws std::runtime_error when the file cannot
// be written.
void render_plot(const std::vector<DailySeries>& series,
                 const std::vector<std::string>& labels,
                 const std::vector<EventAnnotation>& events,
                 const std::filesystem::path& out,
                 const PlotStyle& style = {});

struct RankedTweet {
  TweetRecord record;
  std::size_t hits = 0;
};

// Tweets of local date `date` with at least one keyword hit, most hits
// first, ties by timestamp then id; at most k. `tokens` are the normalized
// forms of corpus records, matched by source id.
std::vector<RankedTweet> top_tweets_for_date(
    const TweetCorpus& corpus, std::span<const TokenizedTweet> tokens,
    const KeywordSet& keywords, Date date, std::size_t k);

}  // namespace burden
