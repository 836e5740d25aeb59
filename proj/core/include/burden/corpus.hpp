#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "burden/dates.hpp"

namespace burden {

struct TweetRecord {
  std::string id;
  Timestamp timestamp;
  std::string region;
  std::string text;
  std::string lang;

  bool operator==(const TweetRecord&) const = default;
};

struct CorpusProvenance {
  std::string source;
  // Informational only; never written into pipeline artifacts.
  std::string loaded_at;
};

// Records are sorted by timestamp (ties by id) and ids are unique.
struct TweetCorpus {
  std::vector<TweetRecord> records;
  CorpusProvenance provenance;
  Date scrape_date{};

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

struct RegionInfo {
  std::string code;
  std::string name;
  std::string country;
  int utc_offset_minutes = 0;
};

class RegionRegistry {
 public:
  RegionRegistry() = default;

  // CSV with header "code,name,country,utc_offset_minutes".
  static RegionRegistry load_csv(const std::filesystem::path& path);

  // Throws on a duplicate code or an offset outside [-720, 840].
  void add(RegionInfo info);

  bool contains(const std::string& code) const {
    return entries_.count(code) != 0;
  }
  // Throws std::out_of_range naming the code.
  const RegionInfo& at(const std::string& code) const;
  int offset_minutes(const std::string& code) const {
    return at(code).utc_offset_minutes;
  }
  const std::map<std::string, RegionInfo>& entries() const { return entries_; }

 private:
  std::map<std::string, RegionInfo> entries_;
};

// Local date of a record under its region's offset.
Date record_local_date(const TweetRecord& record,
                       const RegionRegistry& registry);

struct LoadOptions {
  // Loading fails when malformed / non-blank lines exceeds this ratio.
  double max_malformed_ratio = 0.01;
};

struct LoadResult {
  TweetCorpus corpus;
  std::size_t lines = 0;  // non-blank lines seen
  std::size_t malformed = 0;
  std::vector<std::size_t> malformed_lines;  // 1-based line numbers
};

// Reads newline-delimited JSON objects with keys id, created_at (RFC 3339),
// region, text and lang. Throws std::runtime_error on a missing file, a
// duplicate id, or too many malformed lines.
LoadResult load_corpus(const std::filesystem::path& path, Date scrape_date,
                       const LoadOptions& options = {});

// Inverse of load_corpus.
void write_corpus(const TweetCorpus& corpus, const std::filesystem::path& path);

// Sorts by (timestamp, id) and rejects duplicate ids.
void sort_and_check(TweetCorpus& corpus);

// Keeps records whose ASCII case-folded text contains one of `terms` and
// whose local date lies in `range`. Order is preserved.
TweetCorpus filter_by_query(const TweetCorpus& corpus,
                            const std::vector<std::string>& terms,
                            const DateRange& range,
                            const RegionRegistry& registry);

// Text key used for duplicate detection: leading "RT @user:" prefixes
// stripped, ASCII case-folded, whitespace collapsed.
std::string dedupe_key_text(const std::string& text);

struct DedupeResult {
  TweetCorpus corpus;
  std::size_t removed = 0;
};

// Drops records whose (region, normalized text, local date) repeats an
// earlier record.
DedupeResult deduplicate(const TweetCorpus& corpus,
                         const RegionRegistry& registry);

// Throws std::invalid_argument naming the code and record id when a record's
// region is unknown.
std::map<std::string, TweetCorpus> partition_by_region(
    const TweetCorpus& corpus, const RegionRegistry& registry);

// Reproduces the historical-scrape artifact: records whose local date is at
// least seven days before `scrape_date` survive independently with
// probability `retention`.
TweetCorpus simulate_truncation(const TweetCorpus& corpus, Date scrape_date,
                                double retention, std::uint64_t seed,
                                const RegionRegistry& registry);

// Last local date affected by simulate_truncation.
inline Date last_truncated_date(Date scrape_date) {
  return add_days(scrape_date, -7);
}

// ASCII lowercase; non-ASCII bytes pass through.
std::string ascii_fold(std::string_view text);

}  // namespace burden
