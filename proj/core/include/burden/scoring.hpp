#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burden/dates.hpp"
#include "burden/keywords.hpp"
#include "burden/series.hpp"
#include "burden/text.hpp"

namespace burden {

// Greedy, left-to-right, non-overlapping occurrences of `phrase` in
// `tokens`. A position matches when the phrase tokens appear contiguously,
// or when one token equals the phrase joined by '_' (the form produced by
// code-mix normalization), optionally with a leading '#'.
std::size_t match_keyword_count(std::span<const std::string> tokens,
                                std::span<const std::string> phrase);
std::size_t match_keyword_count(std::span<const std::string> tokens,
                                std::string_view phrase);

// Matches a whole keyword set at once: at each position the longest
// matching phrase wins and consumes its tokens. For sets whose phrases
// never overlap this equals the sum of per-phrase counts; in general every
// hit consumes at least one token.
class KeywordMatcher {
 public:
  explicit KeywordMatcher(const KeywordSet& keywords);

  std::size_t count(std::span<const std::string> tokens) const;

 private:
  std::vector<std::vector<std::string>> phrases_;  // longest first
  std::vector<std::string> joined_;
};

enum class CountMode { occurrences, presence };
enum class VolumeMode { post_cleaning, pre_cleaning };

std::string_view to_string(CountMode mode);
std::string_view to_string(VolumeMode mode);
CountMode parse_count_mode(std::string_view text);
VolumeMode parse_volume_mode(std::string_view text);

// Daily keyword hits over `range`. In presence mode a tweet contributes 1
// when it has any hit. The series region is the keyword set's region (or
// the tweets' when that is empty). Throws std::invalid_argument for tweets
// from another region or dated outside the range.
DailySeries keyword_count_per_day(std::span<const TokenizedTweet> tweets,
                                  const KeywordSet& keywords,
                                  const DateRange& range,
                                  CountMode mode = CountMode::occurrences);

// Daily word totals: normalized token counts, or raw whitespace words in
// pre-cleaning mode.
DailySeries volume_per_day(std::span<const TokenizedTweet> tweets,
                           const std::string& region, const DateRange& range,
                           VolumeMode mode = VolumeMode::post_cleaning);

// Smallest range covering every tweet's date. Throws on an empty span.
DateRange date_span(std::span<const TokenizedTweet> tweets);

}  // namespace burden
