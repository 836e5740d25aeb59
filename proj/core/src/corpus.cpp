#include "burden/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "burden/rng.hpp"
#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

using nlohmann::json;

namespace {

const Date kEarliestTweetDate = parse_date("2006-01-01");

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

TweetRecord parse_record(const std::string& line) {
  const json obj = json::parse(line);
  if (!obj.is_object()) throw std::invalid_argument("not a JSON object");
  TweetRecord rec;
  rec.id = obj.at("id").get<std::string>();
  rec.timestamp = parse_rfc3339(obj.at("created_at").get<std::string>());
  rec.region = obj.at("region").get<std::string>();
  rec.text = obj.at("text").get<std::string>();
  rec.lang = obj.at("lang").get<std::string>();
  if (rec.id.empty()) throw std::invalid_argument("empty id");
  if (rec.region.empty()) throw std::invalid_argument("empty region");
  if (rec.timestamp < Timestamp{kEarliestTweetDate}) {
    throw std::invalid_argument("timestamp before 2006-01-01");
  }
  return rec;
}

std::string now_rfc3339() {
  return format_rfc3339(std::chrono::floor<std::chrono::seconds>(
      std::chrono::system_clock::now()));
}

}  // namespace

std::string ascii_fold(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

RegionRegistry RegionRegistry::load_csv(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "region registry");
  RegionRegistry registry;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    auto fields = detail::split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && detail::trim(fields[0]) == "code") continue;
    }
    if (fields.size() != 4) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 4 fields, got " +
                               std::to_string(fields.size()));
    }
    RegionInfo info;
    info.code = std::string(detail::trim(fields[0]));
    info.name = std::string(detail::trim(fields[1]));
    info.country = std::string(detail::trim(fields[2]));
    try {
      info.utc_offset_minutes = static_cast<int>(
          detail::parse_int(fields[3], "utc_offset_minutes"));
      registry.add(std::move(info));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return registry;
}

void RegionRegistry::add(RegionInfo info) {
  if (info.code.empty()) throw std::invalid_argument("empty region code");
  if (info.utc_offset_minutes < -720 || info.utc_offset_minutes > 840) {
    throw std::invalid_argument("utc offset " +
                                std::to_string(info.utc_offset_minutes) +
                                " out of range for region " + info.code);
  }
  const std::string code = info.code;
  if (!entries_.emplace(code, std::move(info)).second) {
    throw std::invalid_argument("duplicate region code " + code);
  }
}

const RegionInfo& RegionRegistry::at(const std::string& code) const {
  const auto it = entries_.find(code);
  if (it == entries_.end()) {
    throw std::out_of_range("unknown region code '" + code + "'");
  }
  return it->second;
}

Date record_local_date(const TweetRecord& record,
                       const RegionRegistry& registry) {
  return local_date(record.timestamp, registry.offset_minutes(record.region));
}

void sort_and_check(TweetCorpus& corpus) {
  std::sort(corpus.records.begin(), corpus.records.end(),
            [](const TweetRecord& a, const TweetRecord& b) {
              return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
            });
  std::unordered_set<std::string_view> seen;
  seen.reserve(corpus.records.size());
  for (const auto& rec : corpus.records) {
    if (!seen.insert(rec.id).second) {
      throw std::runtime_error("duplicate tweet id '" + rec.id + "'");
    }
  }
}

LoadResult load_corpus(const std::filesystem::path& path, Date scrape_date,
                       const LoadOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error("corpus file not found: '" + path.string() + "'");
  }
  auto in = detail::open_input(path.string(), "corpus");
  LoadResult result;
  result.corpus.scrape_date = scrape_date;
  result.corpus.provenance = {path.string(), now_rfc3339()};

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    ++result.lines;
    try {
      result.corpus.records.push_back(parse_record(line));
    } catch (const std::exception&) {
      ++result.malformed;
      result.malformed_lines.push_back(line_no);
    }
  }
  if (result.lines > 0) {
    const double ratio = static_cast<double>(result.malformed) /
                         static_cast<double>(result.lines);
    if (ratio > options.max_malformed_ratio) {
      throw std::runtime_error(
          path.string() + ": " + std::to_string(result.malformed) + " of " +
          std::to_string(result.lines) +
          " lines malformed (first at line " +
          std::to_string(result.malformed_lines.front()) +
          "), above tolerance");
    }
  }
  sort_and_check(result.corpus);
  return result;
}

void write_corpus(const TweetCorpus& corpus,
                  const std::filesystem::path& path) {
  auto out = detail::open_output(path.string());
  for (const auto& rec : corpus.records) {
    json obj = json::object();
    obj["id"] = rec.id;
    obj["created_at"] = format_rfc3339(rec.timestamp);
    obj["region"] = rec.region;
    obj["text"] = rec.text;
    obj["lang"] = rec.lang;
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

TweetCorpus filter_by_query(const TweetCorpus& corpus,
                            const std::vector<std::string>& terms,
                            const DateRange& range,
                            const RegionRegistry& registry) {
  if (terms.empty()) throw std::invalid_argument("empty query term list");
  if (range.end < range.start) {
    throw std::invalid_argument("date range start after end");
  }
  std::vector<std::string> folded;
  for (const auto& t : terms) {
    if (t.empty()) throw std::invalid_argument("empty query term");
    folded.push_back(ascii_fold(t));
  }
  TweetCorpus out;
  out.provenance = corpus.provenance;
  out.scrape_date = corpus.scrape_date;
  for (const auto& rec : corpus.records) {
    if (!range.contains(record_local_date(rec, registry))) continue;
    const std::string text = ascii_fold(rec.text);
    const bool hit = std::any_of(folded.begin(), folded.end(),
                                 [&](const std::string& term) {
                                   return text.find(term) != std::string::npos;
                                 });
    if (hit) out.records.push_back(rec);
  }
  return out;
}

std::string dedupe_key_text(const std::string& text) {
  std::string_view rest = detail::trim(text);
  // "RT @user:" possibly repeated for retweets of retweets.
  for (;;) {
    if (rest.size() < 4) break;
    if (!((rest[0] == 'R' || rest[0] == 'r') &&
          (rest[1] == 'T' || rest[1] == 't') && rest[2] == ' ' &&
          rest[3] == '@')) {
      break;
    }
    const auto colon = rest.find(':');
    const auto space = rest.find_first_of(" \t", 4);
    if (colon == std::string_view::npos ||
        (space != std::string_view::npos && space < colon)) {
      break;
    }
    rest = detail::trim(rest.substr(colon + 1));
  }
  std::string out;
  out.reserve(rest.size());
  bool pending_space = false;
  for (char c : rest) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

DedupeResult deduplicate(const TweetCorpus& corpus,
                         const RegionRegistry& registry) {
  DedupeResult result;
  result.corpus.provenance = corpus.provenance;
  result.corpus.scrape_date = corpus.scrape_date;
  std::set<std::tuple<std::string, std::string, int>> seen;
  for (const auto& rec : corpus.records) {
    const int day = static_cast<int>(
        record_local_date(rec, registry).time_since_epoch().count());
    if (seen.emplace(rec.region, dedupe_key_text(rec.text), day).second) {
      result.corpus.records.push_back(rec);
    } else {
      ++result.removed;
    }
  }
  return result;
}

std::map<std::string, TweetCorpus> partition_by_region(
    const TweetCorpus& corpus, const RegionRegistry& registry) {
  std::map<std::string, TweetCorpus> parts;
  for (const auto& rec : corpus.records) {
    if (!registry.contains(rec.region)) {
      throw std::invalid_argument("record '" + rec.id +
                                  "' has unknown region code '" + rec.region +
                                  "'");
    }
    auto [it, inserted] = parts.try_emplace(rec.region);
    if (inserted) {
      it->second.provenance = corpus.provenance;
      it->second.scrape_date = corpus.scrape_date;
    }
    it->second.records.push_back(rec);
  }
  return parts;
}

TweetCorpus simulate_truncation(const TweetCorpus& corpus, Date scrape_date,
                                double retention, std::uint64_t seed,
                                const RegionRegistry& registry) {
  if (!(retention > 0.0 && retention <= 1.0)) {
    throw std::invalid_argument("retention must lie in (0, 1]");
  }
  TweetCorpus out;
  out.provenance = corpus.provenance;
  out.scrape_date = scrape_date;
  out.records.reserve(corpus.records.size());
  const Date cutoff = last_truncated_date(scrape_date);
  Rng rng(seed);
  for (const auto& rec : corpus.records) {
    if (record_local_date(rec, registry) <= cutoff) {
      // One draw per old record so the stream does not depend on retention.
      if (!rng.bernoulli(retention)) continue;
    }
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace burden
