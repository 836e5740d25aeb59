#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burden/dates.hpp"
#include "burden/keywords.hpp"
#include "burden/lda.hpp"
#include "burden/scoring.hpp"
#include "burden/smoothing.hpp"
#include "burden/text.hpp"
#include "burden/truncation.hpp"
#include "burden/word2vec.hpp"

namespace burden {

// Raised for invalid configuration or unreadable inputs (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::filesystem::path config_dir;
  // Every key=value pair as written, for the run manifest.
  std::map<std::string, std::string> entries;

  std::filesystem::path dump;
  std::filesystem::path registry;
  Date scrape_date{};
  DateRange range{};
  std::vector<std::string> filter_terms;
  double max_malformed_ratio = 0.01;
  bool dedupe = true;

  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  std::vector<std::filesystem::path> slang;
  std::map<std::string, ScriptPolicy, std::less<>> script_policy;

  // Keyword lists keyed by region code or country; region wins.
  std::map<std::string, std::filesystem::path> keyword_files;
  bool discover = false;
  std::map<std::string, std::vector<std::string>> seeds;
  std::optional<std::filesystem::path> blocklist;
  LdaParams lda;
  Word2VecParams w2v;
  AssembleOptions assemble;  // blocklist filled at load time

  CountMode count_mode = CountMode::occurrences;
  VolumeMode volume_mode = VolumeMode::post_cleaning;

  DetectOptions detect;

  std::optional<std::filesystem::path> cases;
  std::optional<std::filesystem::path> events;
  std::vector<SmoothingSpec> smoothing_grid = default_grid();
  SmoothingSpec fallback_smoother = SmoothingSpec::ma(5);
  int lag = 0;

  std::filesystem::path output_dir;
  std::uint64_t seed = 42;

  // Overrides the LDA and embedding seeds together.
  void set_seed(std::uint64_t s);
};

// Parses a "key = value" file ('#' comments). Relative paths resolve against
// the file's directory; the BURDEN_OUT_DIR environment variable overrides
// output_dir. A .json file is read as a run manifest and its recorded
// settings are replayed. Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);

PipelineConfig parse_config(const std::map<std::string, std::string>& entries,
                            const std::filesystem::path& config_dir);

// Keyword list path for a region (code first, then country).
std::optional<std::filesystem::path> keyword_file_for(
    const PipelineConfig& config, const RegionInfo& region);
// Seed phrases for a region (code first, then country).
std::vector<std::string> seeds_for(const PipelineConfig& config,
                                   const RegionInfo& region);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace burden
