#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "burden/corpus.hpp"
#include "burden/dates.hpp"

namespace burden {

// Scripts that a policy may retain besides printable ASCII.
enum class Script { bengali };

struct ScriptPolicy {
  enum class Kind { latin_only, allow_script };
  Kind kind = Kind::latin_only;
  Script script = Script::bengali;  // meaningful for allow_script only

  static ScriptPolicy latin_only() { return {}; }
  static ScriptPolicy allow(Script s) { return {Kind::allow_script, s}; }

  // Accepts "latin_only" and "allow_script(bengali)".
  static ScriptPolicy parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const ScriptPolicy&) const = default;
};

// Stage names used as keys of TokenizedTweet::dropped.
inline constexpr std::string_view kStageUrls = "urls";
inline constexpr std::string_view kStageScript = "script";
inline constexpr std::string_view kStageTokenize = "tokenize";
inline constexpr std::string_view kStageStopwords = "stopwords";

struct TokenizedTweet {
  std::string source_id;
  std::string region;
  Date date{};
  std::vector<std::string> tokens;
  // Items removed per stage: URLs, code points, empty chunks, stopwords.
  std::map<std::string, std::size_t, std::less<>> dropped;
  // Whitespace-delimited words in the raw text; the pre-cleaning volume.
  std::size_t raw_words = 0;

  bool operator==(const TokenizedTweet&) const = default;
};

struct NormalizerConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_map<std::string, std::string> lemmas;
  std::unordered_map<std::string, std::string> slang;
  std::map<std::string, ScriptPolicy, std::less<>> script_policy;

  // Checks the lexicon invariants that make the pipeline idempotent: keys and
  // values lowercase single tokens, both maps closed under re-application,
  // no value is a stopword and lemma values are not slang keys. Throws
  // std::invalid_argument describing the first violation.
  void validate() const;
};

// Lexicon files: one entry per line; '#' starts a comment line.
std::unordered_set<std::string> load_stopwords(
    const std::filesystem::path& path);
// Two tab-separated columns. Whitespace inside the value becomes '_' so that
// multi-word canonical forms stay one token.
std::unordered_map<std::string, std::string> load_token_map(
    const std::filesystem::path& path);

// Removes http(s):// and www. URLs (up to the next whitespace). When anything
// was removed, whitespace is collapsed to single spaces. `removed` receives
// the number of URLs dropped.
std::string strip_urls(std::string_view text, std::size_t* removed = nullptr);

// latin_only keeps printable ASCII and ASCII whitespace; allow_script also
// keeps the named script's code points. Throws std::invalid_argument when no
// policy exists for `lang`.
std::string apply_script_policy(
    std::string_view text, std::string_view lang,
    const std::map<std::string, ScriptPolicy, std::less<>>& policies,
    std::size_t* removed = nullptr);
std::string apply_script_policy(std::string_view text, ScriptPolicy policy,
                                std::size_t* removed = nullptr);

// Tweet-aware split: '#tag' and '@user' stay whole, surrounding punctuation
// is trimmed, ASCII is lowercased, empty tokens are elided.
std::vector<std::string> tokenize(std::string_view text,
                                  std::size_t* elided = nullptr);

// Number of whitespace-delimited chunks (Unicode whitespace).
std::size_t count_words(std::string_view text);

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& lexicon,
    std::size_t* removed = nullptr);

std::vector<std::string> lemmatize(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::string>& lemma_lexicon);

std::vector<std::string> normalize_codemixed(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::string>& slang_lexicon);

// strip_urls -> apply_script_policy -> tokenize -> remove_stopwords ->
// normalize_codemixed -> lemmatize. The date is the record's local date under
// `utc_offset_minutes`.
TokenizedTweet run_normalizer(const TweetRecord& record,
                              const NormalizerConfig& config,
                              int utc_offset_minutes = 0);

std::vector<TokenizedTweet> normalize_corpus(const TweetCorpus& corpus,
                                             const NormalizerConfig& config,
                                             const RegionRegistry& registry);

// Newline-delimited JSON: {"date","dropped","id","raw_words","region","tokens"}.
void write_tokenized(const std::vector<TokenizedTweet>& tweets,
                     const std::filesystem::path& path);
std::vector<TokenizedTweet> load_tokenized(const std::filesystem::path& path);

}  // namespace burden
