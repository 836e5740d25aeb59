#include "burden/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "dump", "registry", "scrape_date", "start_date", "end_date",
    "filter_terms", "max_malformed_ratio", "dedupe", "stopwords", "lemmas",
    "slang", "script_policy", "discover", "blocklist", "lda.topics",
    "lda.alpha", "lda.beta", "lda.iterations", "w2v.dim", "w2v.window",
    "w2v.negatives", "w2v.epochs", "w2v.min_count", "w2v.learning_rate",
    "weight_floor", "sim_floor", "top_words_per_topic", "neighbors_per_seed",
    "count_mode", "volume_mode", "adjust.window", "adjust.min_ratio",
    "adjust.min_t", "adjust.scan_window", "cases", "events", "smoothing_grid",
    "fallback_smoother", "lag", "output_dir", "seed"};

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto item = detail::trim(text.substr(pos, end - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                    std::string(v) + "'");
}

class Reader {
 public:
  Reader(const std::map<std::string, std::string>& entries,
         std::filesystem::path dir)
      : entries_(entries), dir_(std::move(dir)) {}

  const std::string* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::string& require(const std::string& key) const {
    const auto* v = find(key);
    if (!v) throw ConfigError("config is missing required key '" + key + "'");
    return *v;
  }

  std::filesystem::path path(const std::string& value) const {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : dir_ / p;
  }

  std::filesystem::path existing_path(const std::string& key,
                                      const std::string& value) const {
    auto p = path(value);
    if (!std::filesystem::exists(p)) {
      throw ConfigError("config key '" + key + "': file not found '" +
                        p.string() + "'");
    }
    return p;
  }

  template <typename T, typename Fn>
  void get(const std::string& key, T& out, Fn&& convert) const {
    const auto* v = find(key);
    if (!v) return;
    try {
      out = convert(*v);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }

  int integer(const std::string& key, int fallback) const {
    int out = fallback;
    get(key, out, [](const std::string& v) {
      return static_cast<int>(detail::parse_int(v, "integer"));
    });
    return out;
  }

  double real(const std::string& key, double fallback) const {
    double out = fallback;
    get(key, out,
        [](const std::string& v) { return detail::parse_double(v, "number"); });
    return out;
  }

 private:
  const std::map<std::string, std::string>& entries_;
  std::filesystem::path dir_;
};

std::map<std::string, std::string> read_key_values(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (!entries.emplace(key, value).second) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

}  // namespace

void PipelineConfig::set_seed(std::uint64_t s) {
  seed = s;
  lda.seed = s;
  w2v.seed = s + 1;
}

PipelineConfig parse_config(const std::map<std::string, std::string>& entries,
                            const std::filesystem::path& config_dir) {
  for (const auto& [key, value] : entries) {
    if (kKnownKeys.count(key) || key.rfind("keywords.", 0) == 0 ||
        key.rfind("seeds.", 0) == 0) {
      continue;
    }
    throw ConfigError("unknown config key '" + key + "'");
  }
  const Reader r(entries, config_dir);
  PipelineConfig c;
  c.config_dir = config_dir;
  c.entries = entries;

  c.dump = r.existing_path("dump", r.require("dump"));
  c.registry = r.existing_path("registry", r.require("registry"));
  r.get("scrape_date", c.scrape_date,
        [](const std::string& v) { return parse_date(v); });
  if (!r.find("scrape_date")) {
    throw ConfigError("config is missing required key 'scrape_date'");
  }
  c.range = {parse_date("2020-03-01"), c.scrape_date};
  r.get("start_date", c.range.start,
        [](const std::string& v) { return parse_date(v); });
  r.get("end_date", c.range.end,
        [](const std::string& v) { return parse_date(v); });
  if (c.range.end < c.range.start) {
    throw ConfigError("start_date is after end_date");
  }
  c.filter_terms = {"corona", "covid", "hospital"};
  r.get("filter_terms", c.filter_terms,
        [](const std::string& v) { return split_list(v); });
  if (c.filter_terms.empty()) throw ConfigError("filter_terms is empty");
  c.max_malformed_ratio = r.real("max_malformed_ratio", 0.01);
  r.get("dedupe", c.dedupe,
        [](const std::string& v) { return parse_bool("dedupe", v); });

  c.stopwords = r.existing_path("stopwords", r.require("stopwords"));
  c.lemmas = r.existing_path("lemmas", r.require("lemmas"));
  if (const auto* v = r.find("slang")) {
    for (const auto& p : split_list(*v)) {
      c.slang.push_back(r.existing_path("slang", p));
    }
  }
  c.script_policy = {{"en", ScriptPolicy::latin_only()},
                     {"id", ScriptPolicy::latin_only()},
                     {"bn", ScriptPolicy::allow(Script::bengali)}};
  if (const auto* v = r.find("script_policy")) {
    c.script_policy.clear();
    for (const auto& item : split_list(*v)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("script_policy entry '" + item +
                          "' must be lang:policy");
      }
      try {
        c.script_policy.emplace(std::string(detail::trim(item.substr(0, colon))),
                                ScriptPolicy::parse(item.substr(colon + 1)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("script_policy: ") + e.what());
      }
    }
  }

  for (const auto& [key, value] : entries) {
    if (key.rfind("keywords.", 0) == 0) {
      c.keyword_files[key.substr(9)] = r.existing_path(key, value);
    } else if (key.rfind("seeds.", 0) == 0) {
      c.seeds[key.substr(6)] = split_list(value);
    }
  }
  r.get("discover", c.discover,
        [](const std::string& v) { return parse_bool("discover", v); });
  if (const auto* v = r.find("blocklist")) {
    c.blocklist = r.existing_path("blocklist", *v);
    c.assemble.blocklist = load_blocklist(*c.blocklist);
  }
  c.lda.topics = r.integer("lda.topics", 10);
  c.lda.alpha = r.real("lda.alpha", 0.0);
  c.lda.beta = r.real("lda.beta", 0.01);
  c.lda.iterations = r.integer("lda.iterations", 1000);
  c.w2v.dim = r.integer("w2v.dim", 100);
  c.w2v.window = r.integer("w2v.window", 5);
  c.w2v.negatives = r.integer("w2v.negatives", 5);
  c.w2v.epochs = r.integer("w2v.epochs", 5);
  c.w2v.min_count = r.integer("w2v.min_count", 5);
  c.w2v.learning_rate = r.real("w2v.learning_rate", 0.025);
  c.assemble.weight_floor = r.real("weight_floor", c.assemble.weight_floor);
  c.assemble.sim_floor = r.real("sim_floor", c.assemble.sim_floor);
  c.assemble.top_words_per_topic = static_cast<std::size_t>(
      r.integer("top_words_per_topic", 10));
  c.assemble.neighbors_per_seed =
      static_cast<std::size_t>(r.integer("neighbors_per_seed", 10));

  r.get("count_mode", c.count_mode,
        [](const std::string& v) { return parse_count_mode(v); });
  r.get("volume_mode", c.volume_mode,
        [](const std::string& v) { return parse_volume_mode(v); });

  c.detect.window = r.integer("adjust.window", c.detect.window);
  c.detect.min_ratio = r.real("adjust.min_ratio", c.detect.min_ratio);
  c.detect.min_t = r.real("adjust.min_t", c.detect.min_t);
  c.detect.scan_window = r.integer("adjust.scan_window", c.detect.scan_window);

  // A configured case file that does not exist degrades to "no cases".
  if (const auto* v = r.find("cases")) c.cases = r.path(*v);
  if (const auto* v = r.find("events")) c.events = r.existing_path("events", *v);
  r.get("smoothing_grid", c.smoothing_grid,
        [](const std::string& v) { return parse_smoothing_grid(v); });
  r.get("fallback_smoother", c.fallback_smoother,
        [](const std::string& v) { return SmoothingSpec::parse(v); });
  c.lag = r.integer("lag", 0);

  c.output_dir = r.path(r.find("output_dir") ? *r.find("output_dir") : "out");
  if (const char* env = std::getenv("BURDEN_OUT_DIR"); env && *env) {
    c.output_dir = env;
  }
  std::uint64_t seed = 42;
  r.get("seed", seed, [](const std::string& v) {
    return static_cast<std::uint64_t>(detail::parse_int(v, "seed"));
  });
  c.set_seed(seed);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config file not found: '" + path.string() + "'");
  }
  if (path.extension() == ".json") {
    std::ifstream in(path, std::ios::binary);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      return parse_config(
          j.at("config").get<std::map<std::string, std::string>>(),
          j.at("config_dir").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest '" + path.string() + "': " + e.what());
    }
  }
  const auto dir = std::filesystem::absolute(path).parent_path();
  return parse_config(read_key_values(path), dir);
}

std::optional<std::filesystem::path> keyword_file_for(
    const PipelineConfig& config, const RegionInfo& region) {
  if (auto it = config.keyword_files.find(region.code);
      it != config.keyword_files.end()) {
    return it->second;
  }
  if (auto it = config.keyword_files.find(region.country);
      it != config.keyword_files.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::vector<std::string> seeds_for(const PipelineConfig& config,
                                   const RegionInfo& region) {
  if (auto it = config.seeds.find(region.code); it != config.seeds.end()) {
    return it->second;
  }
  if (auto it = config.seeds.find(region.country); it != config.seeds.end()) {
    return it->second;
  }
  return {};
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

}  // namespace burden
