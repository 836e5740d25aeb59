#include "burden/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "csv_util.hpp"

namespace burden {

namespace {

std::string underscore_join(std::span<const std::string> phrase) {
  std::string out;
  for (const auto& t : phrase) {
    if (!out.empty()) out.push_back('_');
    out += t;
  }
  return out;
}

// Tokens consumed by a match of `phrase` at `pos`, 0 when there is none.
std::size_t match_at(std::span<const std::string> tokens, std::size_t pos,
                     std::span<const std::string> phrase,
                     const std::string& joined) {
  std::string_view tok = tokens[pos];
  if (tok == joined) return 1;
  if (!tok.empty() && tok.front() == '#' && tok.substr(1) == joined) return 1;
  if (phrase.size() > 1 && pos + phrase.size() <= tokens.size() &&
      std::equal(phrase.begin(), phrase.end(), tokens.begin() + pos)) {
    return phrase.size();
  }
  return 0;
}

std::vector<std::string> split_phrase(std::string_view phrase) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < phrase.size()) {
    while (pos < phrase.size() && phrase[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < phrase.size() && phrase[pos] != ' ') ++pos;
    if (pos > start) out.emplace_back(phrase.substr(start, pos - start));
  }
  return out;
}

void check_tweet(const TokenizedTweet& t, const std::string& region,
                 const DateRange& range) {
  if (t.region != region) {
    throw std::invalid_argument("mixed regions: tweet '" + t.source_id +
                                "' is from " + t.region + ", expected " +
                                region);
  }
  if (!range.contains(t.date)) {
    throw std::invalid_argument("tweet '" + t.source_id + "' dated " +
                                format_date(t.date) +
                                " lies outside the scoring range");
  }
}

DailySeries empty_series(const std::string& region, SignalKind kind,
                         const DateRange& range) {
  if (range.end < range.start) {
    throw std::invalid_argument("scoring range start after end");
  }
  DailySeries s;
  s.region = region;
  s.kind = kind;
  s.start = range.start;
  s.values.assign(static_cast<std::size_t>(range.days()), 0.0);
  return s;
}

}  // namespace

std::size_t match_keyword_count(std::span<const std::string> tokens,
                                std::span<const std::string> phrase) {
  if (phrase.empty()) return 0;
  const std::string joined = underscore_join(phrase);
  std::size_t hits = 0;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    const std::size_t used = match_at(tokens, pos, phrase, joined);
    if (used > 0) {
      ++hits;
      pos += used;
    } else {
      ++pos;
    }
  }
  return hits;
}

std::size_t match_keyword_count(std::span<const std::string> tokens,
                                std::string_view phrase) {
  const auto parts = split_phrase(phrase);
  return match_keyword_count(tokens, std::span<const std::string>(parts));
}

KeywordMatcher::KeywordMatcher(const KeywordSet& keywords) {
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    phrases_.push_back(keywords.tokens(i));
  }
  std::stable_sort(phrases_.begin(), phrases_.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() > b.size();
                   });
  for (const auto& p : phrases_) joined_.push_back(underscore_join(p));
}

std::size_t KeywordMatcher::count(std::span<const std::string> tokens) const {
  std::size_t hits = 0;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    std::size_t used = 0;
    for (std::size_t i = 0; i < phrases_.size() && used == 0; ++i) {
      used = match_at(tokens, pos, phrases_[i], joined_[i]);
    }
    if (used > 0) {
      ++hits;
      pos += used;
    } else {
      ++pos;
    }
  }
  return hits;
}

std::string_view to_string(CountMode mode) {
  return mode == CountMode::occurrences ? "occurrences" : "presence";
}

std::string_view to_string(VolumeMode mode) {
  return mode == VolumeMode::post_cleaning ? "post_cleaning" : "pre_cleaning";
}

CountMode parse_count_mode(std::string_view text) {
  text = detail::trim(text);
  if (text == "occurrences") return CountMode::occurrences;
  if (text == "presence") return CountMode::presence;
  throw std::invalid_argument("unknown count mode '" + std::string(text) +
                              "'");
}

VolumeMode parse_volume_mode(std::string_view text) {
  text = detail::trim(text);
  if (text == "post_cleaning") return VolumeMode::post_cleaning;
  if (text == "pre_cleaning") return VolumeMode::pre_cleaning;
  throw std::invalid_argument("unknown volume mode '" + std::string(text) +
                              "'");
}

DailySeries keyword_count_per_day(std::span<const TokenizedTweet> tweets,
                                  const KeywordSet& keywords,
                                  const DateRange& range, CountMode mode) {
  std::string region = keywords.region();
  if (region.empty() && !tweets.empty()) region = tweets.front().region;
  DailySeries s = empty_series(region, SignalKind::keyword_count, range);
  const KeywordMatcher matcher(keywords);
  for (const auto& t : tweets) {
    check_tweet(t, region, range);
    const std::size_t hits = matcher.count(t.tokens);
    const double add = mode == CountMode::presence ? (hits > 0 ? 1.0 : 0.0)
                                                   : static_cast<double>(hits);
    s.values[static_cast<std::size_t>(days_between(range.start, t.date))] +=
        add;
  }
  return s;
}

DailySeries volume_per_day(std::span<const TokenizedTweet> tweets,
                           const std::string& region, const DateRange& range,
                           VolumeMode mode) {
  DailySeries s = empty_series(region, SignalKind::volume, range);
  for (const auto& t : tweets) {
    check_tweet(t, region, range);
    const std::size_t words =
        mode == VolumeMode::post_cleaning ? t.tokens.size() : t.raw_words;
    s.values[static_cast<std::size_t>(days_between(range.start, t.date))] +=
        static_cast<double>(words);
  }
  return s;
}

DateRange date_span(std::span<const TokenizedTweet> tweets) {
  if (tweets.empty()) throw std::invalid_argument("no tweets to span");
  DateRange r{tweets.front().date, tweets.front().date};
  for (const auto& t : tweets) {
    r.start = std::min(r.start, t.date);
    r.end = std::max(r.end, t.date);
  }
  return r;
}

}  // namespace burden
