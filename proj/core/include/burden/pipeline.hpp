#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burden/config.hpp"
#include "burden/corpus.hpp"
#include "burden/text.hpp"

namespace burden {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Stage { ingest, normalize, discover, score, adjust, smooth, report, all };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct RunOptions {
  Stage stage = Stage::all;
  std::optional<std::string> region;
  // Worker threads for per-region work; 0 picks the hardware concurrency.
  unsigned jobs = 0;
};

struct RegionOutcome {
  std::string region;
  bool ok = true;
  std::string failed_stage;
  std::string error;
};

struct RunSummary {
  std::vector<RegionOutcome> regions;  // sorted by code
  // 0 when every region succeeded, 1 otherwise.
  int exit_code() const;
};

// Lexicons named by the config, merged and validated. Throws ConfigError.
NormalizerConfig load_normalizer(const PipelineConfig& config);

std::filesystem::path region_dir(const PipelineConfig& config,
                                 const std::string& code);

struct IngestSummary {
  std::size_t lines = 0;
  std::size_t malformed = 0;
  std::size_t unknown_region = 0;
  std::size_t matched = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> regions;
};

// Loads, filters, deduplicates and partitions the dump, writing
// <out>/<region>/corpus.jsonl and ingest.json. Records of regions missing
// from the registry are dropped and counted. Throws on unreadable input.
IngestSummary run_ingest(const PipelineConfig& config,
                         const RegionRegistry& registry,
                         const std::optional<std::string>& only_region = {});

// One per-region stage reading and writing that region's directory. `all`
// runs normalize through report. Throws on any failure.
void run_region_stage(const PipelineConfig& config, const RegionInfo& region,
                      Stage stage);

// Runs the requested stage for every region (or the selected one). Region
// failures are recorded in the summary and in <region>/error.txt; config or
// global input failures throw.
RunSummary run_pipeline(const PipelineConfig& config,
                        const RunOptions& options = {});

}  // namespace burden
