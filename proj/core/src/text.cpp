#include "burden/text.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

using nlohmann::json;

namespace {

// Decodes one UTF-8 sequence at `pos`. Invalid or truncated sequences decode
// as a single byte with code point -1.
struct Utf8Char {
  long cp;
  std::size_t len;
};

Utf8Char decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len;
  long cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {-1, 1};
  }
  if (pos + len > s.size()) return {-1, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {-1, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr long kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {-1, 1};
  }
  return {cp, len};
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_unicode_space(long cp) {
  if (cp < 0) return false;
  if (cp < 0x80) return is_ascii_space(static_cast<char>(cp));
  return cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

// Danda and double danda, the sentence marks of Bengali text.
bool is_danda(long cp) { return cp == 0x0964 || cp == 0x0965; }

bool in_script(long cp, Script script) {
  switch (script) {
    case Script::bengali:
      // Bengali block, the shared dandas, and ZWNJ/ZWJ used in conjuncts.
      return (cp >= 0x0980 && cp <= 0x09FF) || is_danda(cp) ||
             cp == 0x200C || cp == 0x200D;
  }
  return false;
}

// Length of the trailing punctuation character of `s`, 0 if none.
std::size_t trailing_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_punct(s.back())) return 1;
  if (s.size() >= 3) {
    const auto c = decode_utf8(s, s.size() - 3);
    if (c.len == 3 && is_danda(c.cp)) return 3;
  }
  return 0;
}

std::size_t leading_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_punct(s.front())) return 1;
  const auto c = decode_utf8(s, 0);
  return is_danda(c.cp) ? c.len : 0;
}

std::string_view trim_punct(std::string_view s) {
  for (std::size_t n; (n = trailing_punct_len(s)) > 0;) s.remove_suffix(n);
  for (std::size_t n; (n = leading_punct_len(s)) > 0;) s.remove_prefix(n);
  return s;
}

// Splits on Unicode whitespace.
template <typename Fn>
void for_each_chunk(std::string_view text, Fn&& fn) {
  std::size_t start = std::string_view::npos;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto c = decode_utf8(text, pos);
    if (is_unicode_space(c.cp)) {
      if (start != std::string_view::npos) {
        fn(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += c.len;
  }
  if (start != std::string_view::npos) fn(text.substr(start));
}

bool starts_with_ci(std::string_view s, std::size_t pos,
                    std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_ascii_alnum(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (is_ascii_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) {
      out.push_back(' ');
      pending = false;
    }
    out.push_back(c);
  }
  return out;
}

bool is_single_token(const std::string& s) {
  const auto toks = tokenize(s);
  return toks.size() == 1 && toks.front() == s;
}

}  // namespace

ScriptPolicy ScriptPolicy::parse(std::string_view text) {
  text = detail::trim(text);
  if (text == "latin_only") return latin_only();
  if (text == "allow_script(bengali)") return allow(Script::bengali);
  throw std::invalid_argument("unknown script policy '" + std::string(text) +
                              "'");
}

std::string ScriptPolicy::to_string() const {
  if (kind == Kind::latin_only) return "latin_only";
  return "allow_script(bengali)";
}

void NormalizerConfig::validate() const {
  const auto check_entry = [](const std::string& what, const std::string& key,
                              const std::string& value) {
    if (!is_single_token(key)) {
      throw std::invalid_argument(what + " key '" + key +
                                  "' is not a normalized token");
    }
    if (!is_single_token(value)) {
      throw std::invalid_argument(what + " value '" + value + "' for '" +
                                  key + "' is not a normalized token");
    }
  };
  for (const auto& w : stopwords) {
    if (!is_single_token(w)) {
      throw std::invalid_argument("stopword '" + w +
                                  "' is not a normalized token");
    }
  }
  for (const auto& [k, v] : slang) {
    check_entry("slang", k, v);
    if (auto it = slang.find(v); it != slang.end() && it->second != v) {
      throw std::invalid_argument("slang map not closed: '" + k + "' -> '" +
                                  v + "' -> '" + it->second + "'");
    }
    if (stopwords.count(v)) {
      throw std::invalid_argument("slang value '" + v + "' is a stopword");
    }
  }
  for (const auto& [k, v] : lemmas) {
    check_entry("lemma", k, v);
    if (auto it = lemmas.find(v); it != lemmas.end() && it->second != v) {
      throw std::invalid_argument("lemma map not closed: '" + k + "' -> '" +
                                  v + "' -> '" + it->second + "'");
    }
    if (stopwords.count(v)) {
      throw std::invalid_argument("lemma value '" + v + "' is a stopword");
    }
    if (auto it = slang.find(v); it != slang.end() && it->second != v) {
      throw std::invalid_argument("lemma value '" + v +
                                  "' is rewritten by the slang map");
    }
  }
}

std::unordered_set<std::string> load_stopwords(
    const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "stopword lexicon");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    const auto word = detail::trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(ascii_fold(word));
  }
  return words;
}

std::unordered_map<std::string, std::string> load_token_map(
    const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "token map");
  std::unordered_map<std::string, std::string> map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected two tab-separated columns");
    }
    const std::string key = ascii_fold(detail::trim(line.substr(0, tab)));
    std::string value = ascii_fold(detail::trim(line.substr(tab + 1)));
    std::string joined;
    for_each_chunk(value, [&](std::string_view w) {
      if (!joined.empty()) joined.push_back('_');
      joined.append(w);
    });
    if (key.empty() || joined.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": empty key or value");
    }
    if (!map.emplace(key, joined).second) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
    }
  }
  return map;
}

std::string strip_urls(std::string_view text, std::size_t* removed) {
  std::string out;
  out.reserve(text.size());
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const bool url =
        starts_with_ci(text, pos, "http://") ||
        starts_with_ci(text, pos, "https://") ||
        (starts_with_ci(text, pos, "www.") &&
         (pos == 0 || !is_ascii_alnum(text[pos - 1])));
    if (url) {
      ++count;
      while (pos < text.size() && !is_ascii_space(text[pos])) ++pos;
      continue;
    }
    out.push_back(text[pos++]);
  }
  if (removed) *removed = count;
  if (count == 0) return std::string(text);
  return collapse_whitespace(out);
}

std::string apply_script_policy(std::string_view text, ScriptPolicy policy,
                                std::size_t* removed) {
  std::string out;
  out.reserve(text.size());
  std::size_t dropped = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto c = decode_utf8(text, pos);
    bool keep;
    if (c.cp >= 0 && c.cp < 0x80) {
      keep = (c.cp >= 0x20 && c.cp < 0x7F) ||
             is_ascii_space(static_cast<char>(c.cp));
    } else {
      keep = policy.kind == ScriptPolicy::Kind::allow_script && c.cp >= 0 &&
             in_script(c.cp, policy.script);
    }
    if (keep) {
      out.append(text.substr(pos, c.len));
    } else {
      ++dropped;
    }
    pos += c.len;
  }
  if (removed) *removed = dropped;
  return out;
}

std::string apply_script_policy(
    std::string_view text, std::string_view lang,
    const std::map<std::string, ScriptPolicy, std::less<>>& policies,
    std::size_t* removed) {
  const auto it = policies.find(lang);
  if (it == policies.end()) {
    throw std::invalid_argument("no script policy for language '" +
                                std::string(lang) + "'");
  }
  return apply_script_policy(text, it->second, removed);
}

std::vector<std::string> tokenize(std::string_view text, std::size_t* elided) {
  std::vector<std::string> tokens;
  std::size_t empty = 0;
  for_each_chunk(text, [&](std::string_view chunk) {
    std::string_view body = chunk;
    for (std::size_t n; (n = trailing_punct_len(body)) > 0;) {
      body.remove_suffix(n);
    }
    std::string token;
    if (!body.empty() && (body.front() == '#' || body.front() == '@')) {
      const std::string_view rest = trim_punct(body.substr(1));
      if (!rest.empty()) {
        token.push_back(body.front());
        token.append(rest);
      }
    } else {
      token = std::string(trim_punct(body));
    }
    if (token.empty()) {
      ++empty;
      return;
    }
    for (char& c : token) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    tokens.push_back(std::move(token));
  });
  if (elided) *elided = empty;
  return tokens;
}

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  for_each_chunk(text, [&](std::string_view) { ++n; });
  return n;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& lexicon, std::size_t* removed) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!lexicon.count(t)) out.push_back(t);
  }
  if (removed) *removed = tokens.size() - out.size();
  return out;
}

std::vector<std::string> lemmatize(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::string>& lemma_lexicon) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto it = lemma_lexicon.find(t);
    out.push_back(it == lemma_lexicon.end() ? t : it->second);
  }
  return out;
}

std::vector<std::string> normalize_codemixed(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::string>& slang_lexicon) {
  return lemmatize(tokens, slang_lexicon);
}

TokenizedTweet run_normalizer(const TweetRecord& record,
                              const NormalizerConfig& config,
                              int utc_offset_minutes) {
  TokenizedTweet out;
  out.source_id = record.id;
  out.region = record.region;
  out.date = local_date(record.timestamp, utc_offset_minutes);
  out.raw_words = count_words(record.text);

  std::size_t n = 0;
  const std::string no_urls = strip_urls(record.text, &n);
  out.dropped.emplace(kStageUrls, n);
  const std::string scripted =
      apply_script_policy(no_urls, record.lang, config.script_policy, &n);
  out.dropped.emplace(kStageScript, n);
  auto tokens = tokenize(scripted, &n);
  out.dropped.emplace(kStageTokenize, n);
  tokens = remove_stopwords(tokens, config.stopwords, &n);
  out.dropped.emplace(kStageStopwords, n);
  tokens = normalize_codemixed(tokens, config.slang);
  out.tokens = lemmatize(tokens, config.lemmas);
  return out;
}

std::vector<TokenizedTweet> normalize_corpus(const TweetCorpus& corpus,
                                             const NormalizerConfig& config,
                                             const RegionRegistry& registry) {
  std::vector<TokenizedTweet> out;
  out.reserve(corpus.records.size());
  for (const auto& rec : corpus.records) {
    out.push_back(
        run_normalizer(rec, config, registry.offset_minutes(rec.region)));
  }
  return out;
}

void write_tokenized(const std::vector<TokenizedTweet>& tweets,
                     const std::filesystem::path& path) {
  auto out = detail::open_output(path.string());
  for (const auto& t : tweets) {
    json obj = json::object();
    obj["id"] = t.source_id;
    obj["region"] = t.region;
    obj["date"] = format_date(t.date);
    obj["tokens"] = t.tokens;
    obj["raw_words"] = t.raw_words;
    json dropped = json::object();
    for (const auto& [stage, count] : t.dropped) dropped[stage] = count;
    obj["dropped"] = std::move(dropped);
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

std::vector<TokenizedTweet> load_tokenized(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "tokenized tweets");
  std::vector<TokenizedTweet> tweets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    try {
      const json obj = json::parse(line);
      TokenizedTweet t;
      t.source_id = obj.at("id").get<std::string>();
      t.region = obj.at("region").get<std::string>();
      t.date = parse_date(obj.at("date").get<std::string>());
      t.tokens = obj.at("tokens").get<std::vector<std::string>>();
      t.raw_words = obj.at("raw_words").get<std::size_t>();
      for (const auto& [stage, count] : obj.at("dropped").items()) {
        t.dropped.emplace(stage, count.get<std::size_t>());
      }
      tweets.push_back(std::move(t));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return tweets;
}

}  // namespace burden
