#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "burden/matrix.hpp"
#include "burden/text.hpp"

namespace burden {

struct Word2VecParams {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  int min_count = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of this value
  std::uint64_t seed = 1;
  // Evaluate the full objective after each epoch into epoch_loss.
  bool track_loss = false;
};

// Skip-gram embeddings. Vocabulary is ordered by count descending, ties
// lexicographic.
struct EmbeddingModel {
  Vocabulary vocab;
  std::vector<std::uint64_t> counts;
  int dim = 0;
  Matrix input_vectors;   // V x dim, the word embeddings
  Matrix output_vectors;  // V x dim, context vectors
  Word2VecParams params;
  std::vector<double> epoch_loss;
};

// Negative-sampling loss of one (center, context) pair:
//   -log σ(c·u_ctx) - Σ_n log σ(-c·u_n)
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives);

struct SgnsGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// Analytic gradient of sgns_loss with respect to every argument.
SgnsGradient sgns_gradient(std::span<const double> center,
                           std::span<const double> context,
                           std::span<const std::span<const double>> negatives);

// One SGD step of sgns_loss at learning rate lr, applied in place. Negatives
// must not alias the context row. Returns the loss before the step.
double sgns_sgd_step(std::span<double> center, std::span<double> context,
                     std::span<const std::span<double>> negatives, double lr);

// Trains skip-gram with negative sampling, drawing negatives from the
// unigram^(3/4) distribution. Single-threaded and deterministic for a seed.
// Throws std::invalid_argument on bad parameters or when no token reaches
// min_count.
EmbeddingModel w2v_train(std::span<const TokenizedTweet> tweets,
                         const Word2VecParams& params);

// Mean sgns_loss over every in-vocabulary (center, context) pair of the
// corpus with `negatives` noise words per pair drawn from `seed`. With a
// fixed seed this is a deterministic objective suitable for comparing
// models.
double w2v_corpus_loss(const EmbeddingModel& model,
                       std::span<const TokenizedTweet> tweets, int negatives,
                       std::uint64_t seed);

// Cosine similarity; 0 when either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

// k nearest words to `word` by cosine on the input vectors, excluding the
// word itself; similarity descending, ties lexicographic. Throws
// std::out_of_range naming an out-of-vocabulary word.
std::vector<std::pair<std::string, double>> w2v_nearest(
    const EmbeddingModel& model, const std::string& word, std::size_t k);

// JSON container with hyperparameters, seed, vocabulary, counts and both
// matrices.
void write_embedding(const EmbeddingModel& model,
                     const std::filesystem::path& path);
EmbeddingModel load_embedding(const std::filesystem::path& path);

}  // namespace burden
