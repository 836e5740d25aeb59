#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "burden/matrix.hpp"
#include "burden/rng.hpp"
#include "burden/text.hpp"

namespace burden {

struct LdaParams {
  int topics = 10;
  // Non-positive alpha means the 50/K default.
  double alpha = 0.0;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha > 0.0 ? alpha : 50.0 / topics; }
};

// Posterior state of a collapsed Gibbs run. topic_word rows are
// (n_kw + beta) / (n_k + V beta); doc_topic rows are
// (n_dk + alpha) / (n_d + K alpha).
struct TopicModel {
  int topics = 0;
  Vocabulary vocab;
  Matrix topic_word;  // K x V
  Matrix doc_topic;   // D x K
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::vector<int>> assignments;  // per document, per token
  std::uint64_t seed = 0;
  int iterations = 0;
};

// Collapsed Gibbs sampler over integer-coded documents. Exposed so callers
// can step sweeps and inspect counts; lda_fit drives it to completion.
class LdaSampler {
 public:
  // docs hold word ids < vocab_size. Initial topics are drawn uniformly.
  LdaSampler(std::vector<std::vector<int>> docs, std::size_t vocab_size,
             int topics, double alpha, double beta, std::uint64_t seed);

  // One full sweep: every token is resampled once, in document order.
  void sweep();

  int topics() const { return topics_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t token_count() const { return token_count_; }
  const std::vector<std::vector<int>>& assignments() const { return z_; }
  // n_k: tokens assigned to each topic.
  const std::vector<long>& topic_totals() const { return n_k_; }
  long topic_word_count(int k, std::size_t w) const {
    return n_kw_[static_cast<std::size_t>(k) * vocab_size_ + w];
  }
  long doc_topic_count(std::size_t d, int k) const {
    return n_dk_[d * static_cast<std::size_t>(topics_) +
                 static_cast<std::size_t>(k)];
  }

  Matrix topic_word() const;
  Matrix doc_topic() const;

 private:
  std::vector<std::vector<int>> docs_;
  std::vector<std::vector<int>> z_;
  std::size_t vocab_size_;
  int topics_;
  double alpha_;
  double beta_;
  std::size_t token_count_ = 0;
  std::vector<long> n_kw_;
  std::vector<long> n_dk_;
  std::vector<long> n_k_;
  std::vector<double> weights_;
  Rng rng_;
};

// Fits LDA with `params.iterations` sweeps. The vocabulary is the sorted set
// of tokens. Throws std::invalid_argument when the corpus has no tokens, the
// vocabulary is smaller than K, or a parameter is out of range (K >= 1,
// alpha and beta > 0, iterations >= 1).
TopicModel lda_fit(std::span<const TokenizedTweet> tweets,
                   const LdaParams& params);

// The m heaviest words of a topic, weight descending, ties lexicographic.
std::vector<std::pair<std::string, double>> lda_top_words(
    const TopicModel& model, int topic, std::size_t m);

// JSON container with hyperparameters, seed, vocabulary, both matrices and
// the final assignments.
void write_topic_model(const TopicModel& model,
                       const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);

}  // namespace burden
