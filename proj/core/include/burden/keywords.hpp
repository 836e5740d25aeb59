#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "burden/lda.hpp"
#include "burden/text.hpp"
#include "burden/word2vec.hpp"

namespace burden {

enum class KeywordSource { seed, lda, w2v, manual };

std::string_view to_string(KeywordSource source);
KeywordSource parse_keyword_source(std::string_view text);

// Lowercase phrases of 1-3 space-separated tokens, unique, each with the
// route that contributed it.
class KeywordSet {
 public:
  KeywordSet() = default;
  explicit KeywordSet(std::string region) : region_(std::move(region)) {}

  // Case-folds and whitespace-normalizes `phrase`. Returns false when the
  // phrase is already present. Throws std::invalid_argument for an empty
  // phrase or one longer than three tokens.
  bool add(std::string_view phrase, KeywordSource source);

  bool contains(std::string_view phrase) const;
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }

  const std::string& region() const { return region_; }
  void set_region(std::string region) { region_ = std::move(region); }
  const std::vector<std::string>& phrases() const { return phrases_; }
  const std::vector<KeywordSource>& provenance() const { return sources_; }
  // Tokens of phrase i.
  std::vector<std::string> tokens(std::size_t i) const;

 private:
  std::string region_;
  std::vector<std::string> phrases_;
  std::vector<KeywordSource> sources_;
};

// Two tab-separated columns: phrase, provenance. Lines starting with '#'
// are comments. A single-column line is read as a manual phrase.
KeywordSet load_keywords(const std::filesystem::path& path,
                         std::string region);
void write_keywords(const KeywordSet& keywords,
                    const std::filesystem::path& path);

// Runs each phrase token through the normalizer's lexicon stages (fold,
// tokenize, slang, lemma; stopwords are kept) so phrases compare against
// normalized tweets. Phrases that normalize to nothing are dropped; merged
// duplicates keep the first provenance.
KeywordSet normalize_keywords(const KeywordSet& keywords,
                              const NormalizerConfig& config);

struct AssembleOptions {
  // A topic is expanded when some seed token's weight in it exceeds this,
  // and contributes its top words whose weight exceeds it too.
  double weight_floor = 0.01;
  // Embedding neighbours of seed tokens with cosine >= this are added.
  double sim_floor = 0.6;
  std::size_t top_words_per_topic = 10;
  std::size_t neighbors_per_seed = 10;
  // Expansion terms never admitted (mechanized manual review).
  std::set<std::string> blocklist;
};

std::set<std::string> load_blocklist(const std::filesystem::path& path);

// Seeds first, then LDA expansions, then embedding expansions. Either model
// may be null. Expansion tokens lose a leading '#'; '@' mentions are never
// added. Throws std::invalid_argument for empty seeds or floors outside
// [0, 1].
KeywordSet assemble_keywords(const std::vector<std::string>& seeds,
                             const TopicModel* topic_model,
                             const EmbeddingModel* embedding,
                             const AssembleOptions& options,
                             const std::string& region);

}  // namespace burden
