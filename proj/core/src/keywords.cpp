#include "burden/keywords.hpp"

#include <algorithm>
#include <stdexcept>

#include "csv_util.hpp"

namespace burden {

namespace {

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    if (pos > start) out.emplace_back(s.substr(start, pos - start));
  }
  return out;
}

std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string canonical_phrase(std::string_view phrase) {
  return join(split_spaces(ascii_fold(phrase)));
}

// Expansion candidates: hashtags contribute their body, mentions nothing.
std::string expansion_term(const std::string& token) {
  if (token.empty() || token.front() == '@') return {};
  if (token.front() == '#') return token.substr(1);
  return token;
}

}  // namespace

std::string_view to_string(KeywordSource source) {
  switch (source) {
    case KeywordSource::seed: return "seed";
    case KeywordSource::lda: return "lda";
    case KeywordSource::w2v: return "w2v";
    case KeywordSource::manual: return "manual";
  }
  return "manual";
}

KeywordSource parse_keyword_source(std::string_view text) {
  text = detail::trim(text);
  if (text == "seed") return KeywordSource::seed;
  if (text == "lda") return KeywordSource::lda;
  if (text == "w2v") return KeywordSource::w2v;
  if (text == "manual") return KeywordSource::manual;
  throw std::invalid_argument("unknown keyword provenance '" +
                              std::string(text) + "'");
}

bool KeywordSet::add(std::string_view phrase, KeywordSource source) {
  const std::string canon = canonical_phrase(phrase);
  if (canon.empty()) throw std::invalid_argument("empty keyword phrase");
  if (split_spaces(canon).size() > 3) {
    throw std::invalid_argument("keyword phrase '" + canon +
                                "' has more than three tokens");
  }
  if (contains(canon)) return false;
  phrases_.push_back(canon);
  sources_.push_back(source);
  return true;
}

bool KeywordSet::contains(std::string_view phrase) const {
  const std::string canon = canonical_phrase(phrase);
  return std::find(phrases_.begin(), phrases_.end(), canon) != phrases_.end();
}

std::vector<std::string> KeywordSet::tokens(std::size_t i) const {
  return split_spaces(phrases_.at(i));
}

KeywordSet load_keywords(const std::filesystem::path& path,
                         std::string region) {
  auto in = detail::open_input(path.string(), "keyword list");
  KeywordSet set(std::move(region));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    try {
      if (tab == std::string::npos) {
        set.add(line, KeywordSource::manual);
      } else {
        set.add(line.substr(0, tab),
                parse_keyword_source(line.substr(tab + 1)));
      }
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  if (set.empty()) {
    throw std::runtime_error("keyword list '" + path.string() + "' is empty");
  }
  return set;
}

void write_keywords(const KeywordSet& keywords,
                    const std::filesystem::path& path) {
  auto out = detail::open_output(path.string());
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    out << keywords.phrases()[i] << '\t' << to_string(keywords.provenance()[i])
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

KeywordSet normalize_keywords(const KeywordSet& keywords,
                              const NormalizerConfig& config) {
  KeywordSet out(keywords.region());
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    auto toks = tokenize(keywords.phrases()[i]);
    toks = lemmatize(normalize_codemixed(toks, config.slang), config.lemmas);
    if (toks.empty()) continue;
    out.add(join(toks), keywords.provenance()[i]);
  }
  return out;
}

std::set<std::string> load_blocklist(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "blocklist");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    const auto w = detail::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(canonical_phrase(w));
  }
  return words;
}

KeywordSet assemble_keywords(const std::vector<std::string>& seeds,
                             const TopicModel* topic_model,
                             const EmbeddingModel* embedding,
                             const AssembleOptions& options,
                             const std::string& region) {
  if (seeds.empty()) throw std::invalid_argument("no seed keywords");
  if (options.weight_floor < 0.0 || options.weight_floor > 1.0 ||
      options.sim_floor < 0.0 || options.sim_floor > 1.0) {
    throw std::invalid_argument("keyword floors must lie in [0, 1]");
  }
  KeywordSet set(region);
  std::vector<std::string> seed_tokens;
  for (const auto& s : seeds) {
    set.add(s, KeywordSource::seed);
    for (auto& t : split_spaces(ascii_fold(s))) {
      if (std::find(seed_tokens.begin(), seed_tokens.end(), t) ==
          seed_tokens.end()) {
        seed_tokens.push_back(std::move(t));
      }
    }
  }
  const auto admit = [&](const std::string& token, KeywordSource source) {
    const std::string term = expansion_term(token);
    if (term.empty() || options.blocklist.count(term)) return;
    set.add(term, source);
  };

  if (topic_model != nullptr) {
    for (int k = 0; k < topic_model->topics; ++k) {
      const auto row = topic_model->topic_word.row(static_cast<std::size_t>(k));
      const bool has_seed =
          std::any_of(seed_tokens.begin(), seed_tokens.end(),
                      [&](const std::string& t) {
                        const int id = topic_model->vocab.find(t);
                        return id >= 0 && row[static_cast<std::size_t>(id)] >
                                              options.weight_floor;
                      });
      if (!has_seed) continue;
      for (const auto& [word, weight] :
           lda_top_words(*topic_model, k, options.top_words_per_topic)) {
        if (weight > options.weight_floor) admit(word, KeywordSource::lda);
      }
    }
  }
  if (embedding != nullptr) {
    for (const auto& t : seed_tokens) {
      if (!embedding->vocab.contains(t)) continue;
      for (const auto& [word, sim] :
           w2v_nearest(*embedding, t, options.neighbors_per_seed)) {
        if (sim >= options.sim_floor) admit(word, KeywordSource::w2v);
      }
    }
  }
  return set;
}

}  // namespace burden
