#include "burden/ngram.hpp"

#include <algorithm>
#include <stdexcept>

namespace burden {

NGramTable build_ngram_table(std::span<const TokenizedTweet> tweets, int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be at least 1");
  NGramTable table;
  table.n = n;
  const auto width = static_cast<std::size_t>(n);
  for (const auto& tweet : tweets) {
    const auto& toks = tweet.tokens;
    if (toks.size() < width) continue;
    for (std::size_t i = 0; i + width <= toks.size(); ++i) {
      ++table.counts[NGram(toks.begin() + i, toks.begin() + i + width)];
      ++table.total;
    }
  }
  return table;
}

std::vector<std::pair<NGram, std::uint64_t>> top_ngrams(
    const NGramTable& table, std::size_t m) {
  std::vector<std::pair<NGram, std::uint64_t>> rows(table.counts.begin(),
                                                    table.counts.end());
  // counts is already in lexicographic order, so a stable sort by count
  // leaves ties lexicographic.
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  if (rows.size() > m) rows.resize(m);
  return rows;
}

std::string join_ngram(const NGram& gram, char sep) {
  std::string out;
  for (const auto& t : gram) {
    if (!out.empty()) out.push_back(sep);
    out += t;
  }
  return out;
}

}  // namespace burden
