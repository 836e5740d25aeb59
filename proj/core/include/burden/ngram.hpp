#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "burden/text.hpp"

namespace burden {

using NGram = std::vector<std::string>;

// Contiguous token n-gram counts. total equals the sum of counts.
struct NGramTable {
  int n = 1;
  std::map<NGram, std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t count(const NGram& gram) const {
    const auto it = counts.find(gram);
    return it == counts.end() ? 0 : it->second;
  }
};

// Counts n-grams within each tweet; n-grams never span two tweets. Throws
// std::invalid_argument for n < 1.
NGramTable build_ngram_table(std::span<const TokenizedTweet> tweets, int n);

// The m most frequent n-grams, count descending then lexicographic.
std::vector<std::pair<NGram, std::uint64_t>> top_ngrams(
    const NGramTable& table, std::size_t m);

std::string join_ngram(const NGram& gram, char sep = ' ');

}  // namespace burden
