#include "burden/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "burden/keywords.hpp"
#include "burden/lda.hpp"
#include "burden/report.hpp"
#include "burden/scoring.hpp"
#include "burden/series.hpp"
#include "burden/smoothing.hpp"
#include "burden/truncation.hpp"
#include "burden/word2vec.hpp"
#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr Stage kRegionStages[] = {Stage::normalize, Stage::discover,
                                   Stage::score,     Stage::adjust,
                                   Stage::smooth,    Stage::report};

constexpr std::size_t kPeakDays = 3;
constexpr std::size_t kPeakTweets = 5;

void write_text(const fs::path& path, const std::string& text) {
  auto out = detail::open_output(path.string());
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) throw std::runtime_error("write failed: '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path require_file(const fs::path& dir, std::string_view name,
                      Stage producer) {
  auto p = dir / name;
  if (!fs::exists(p)) {
    throw std::runtime_error("missing intermediate " + std::string(name) +
                             "; run the " + std::string(to_string(producer)) +
                             " stage first");
  }
  return p;
}

RegionRegistry single_region(const RegionInfo& region) {
  RegionRegistry r;
  r.add(region);
  return r;
}

const DailySeries& series_of(const std::vector<DailySeries>& all,
                             SignalKind kind, const fs::path& source) {
  for (const auto& s : all) {
    if (s.kind == kind) return s;
  }
  throw std::runtime_error(source.string() + " has no " +
                           std::string(to_string(kind)) + " series");
}

void attach_scrape_date(DailySeries& s, Date scrape) {
  if (!s.empty() && s.start <= scrape && scrape <= s.end()) {
    s.scrape_date = scrape;
  }
}

void stage_normalize(const PipelineConfig& config, const RegionInfo& region,
                     const fs::path& dir) {
  const auto corpus =
      load_corpus(require_file(dir, "corpus.jsonl", Stage::ingest),
                  config.scrape_date, {0.0})
          .corpus;
  const auto normalizer = load_normalizer(config);
  std::vector<TokenizedTweet> tweets;
  tweets.reserve(corpus.size());
  std::map<std::string, std::size_t> skipped_lang;
  std::map<std::string, std::size_t, std::less<>> dropped;
  for (const auto& rec : corpus.records) {
    if (!normalizer.script_policy.count(rec.lang)) {
      ++skipped_lang[rec.lang];
      continue;
    }
    tweets.push_back(
        run_normalizer(rec, normalizer, region.utc_offset_minutes));
    for (const auto& [stage, n] : tweets.back().dropped) dropped[stage] += n;
  }
  write_tokenized(tweets, dir / "tokens.jsonl");

  ordered_json stats;
  stats["region"] = region.code;
  stats["tweets"] = tweets.size();
  stats["skipped_lang"] = skipped_lang;
  ordered_json d = ordered_json::object();
  for (const auto& [stage, n] : dropped) d[stage] = n;
  stats["dropped"] = std::move(d);
  write_text(dir / "normalize.json", stats.dump(2));
}

void stage_discover(const PipelineConfig& config, const RegionInfo& region,
                    const fs::path& dir) {
  const auto normalizer = load_normalizer(config);
  KeywordSet keywords;
  if (config.discover) {
    const auto seeds = seeds_for(config, region);
    if (seeds.empty()) {
      throw std::runtime_error("discovery enabled but no seeds for region " +
                               region.code);
    }
    const auto tweets =
        load_tokenized(require_file(dir, "tokens.jsonl", Stage::normalize));
    KeywordSet seed_set(region.code);
    for (const auto& s : seeds) seed_set.add(s, KeywordSource::seed);
    const auto normalized_seeds = normalize_keywords(seed_set, normalizer);

    const auto topics = lda_fit(tweets, config.lda);
    write_topic_model(topics, dir / "lda.json");
    const auto embedding = w2v_train(tweets, config.w2v);
    write_embedding(embedding, dir / "embedding.json");

    keywords = assemble_keywords(normalized_seeds.phrases(), &topics,
                                 &embedding, config.assemble, region.code);
  } else {
    const auto path = keyword_file_for(config, region);
    if (!path) {
      throw std::runtime_error("no keyword list configured for region " +
                               region.code + " or country " + region.country);
    }
    keywords = load_keywords(*path, region.code);
  }
  keywords = normalize_keywords(keywords, normalizer);
  if (keywords.empty()) {
    throw std::runtime_error("keyword list is empty after normalization");
  }
  keywords.set_region(region.code);
  write_keywords(keywords, dir / "keywords.tsv");
}

void stage_score(const PipelineConfig& config, const RegionInfo& region,
                 const fs::path& dir) {
  const auto tweets =
      load_tokenized(require_file(dir, "tokens.jsonl", Stage::normalize));
  const auto keywords = load_keywords(
      require_file(dir, "keywords.tsv", Stage::discover), region.code);
  auto counts =
      keyword_count_per_day(tweets, keywords, config.range, config.count_mode);
  auto volume =
      volume_per_day(tweets, region.code, config.range, config.volume_mode);
  counts.region = region.code;
  write_series_csv({counts, volume}, dir / "raw.csv");
}

void stage_adjust(const PipelineConfig& config, const RegionInfo& region,
                  const fs::path& dir) {
  const auto raw_path = require_file(dir, "raw.csv", Stage::score);
  const auto raw = read_series_csv(raw_path);
  ordered_json reports;
  reports["region"] = region.code;
  std::vector<DailySeries> adjusted;
  for (const auto kind : {SignalKind::keyword_count, SignalKind::volume}) {
    auto series = series_of(raw, kind, raw_path);
    attach_scrape_date(series, config.scrape_date);
    const auto report = detect_boundary(series, config.detect);
    reports[std::string(to_string(kind))] =
        ordered_json::parse(to_json(report));
    adjusted.push_back(adjust(series, report));
  }
  write_text(dir / "boundary.json", reports.dump(2));
  write_series_csv(adjusted, dir / "adjusted.csv");
}

// Why no selection took place, or empty when cases are available.
std::string missing_cases_note(const PipelineConfig& config,
                               const std::map<std::string, CaseSeries>& cases,
                               const std::string& code) {
  if (!config.cases) return "no cases: case file not configured";
  if (!fs::exists(*config.cases)) return "no cases: case file not found";
  if (!cases.count(code)) return "no cases: region absent from case file";
  return {};
}

void stage_smooth(const PipelineConfig& config, const RegionInfo& region,
                  const fs::path& dir) {
  const auto adj_path = require_file(dir, "adjusted.csv", Stage::adjust);
  const auto adjusted = read_series_csv(adj_path);
  std::map<std::string, CaseSeries> cases;
  if (config.cases && fs::exists(*config.cases)) {
    cases = read_cases_csv(*config.cases);
  }
  const std::string note = missing_cases_note(config, cases, region.code);

  ordered_json selection;
  selection["region"] = region.code;
  std::vector<DailySeries> smoothed;
  for (const auto kind : {SignalKind::keyword_count, SignalKind::volume}) {
    const auto& series = series_of(adjusted, kind, adj_path);
    ordered_json entry;
    SmoothingSpec chosen = config.fallback_smoother;
    if (note.empty()) {
      try {
        const auto report = select_model(series, cases.at(region.code),
                                         config.smoothing_grid, config.lag);
        entry = ordered_json::parse(to_json(report));
        chosen = report.winner;
      } catch (const std::exception& e) {
        entry = ordered_json::object();
        entry["region"] = region.code;
        entry["status"] = "skipped";
        entry["note"] = std::string("selection failed: ") + e.what();
        entry["winner"] = chosen.to_string();
      }
    } else {
      entry["region"] = region.code;
      entry["status"] = "skipped";
      entry["note"] = note;
      entry["winner"] = chosen.to_string();
    }
    selection[std::string(to_string(kind))] = std::move(entry);
    smoothed.push_back(smooth(series, chosen));
  }
  write_text(dir / "selection.json", selection.dump(2));
  write_series_csv(smoothed, dir / "smoothed.csv");
}

ordered_json peaks_json(const PipelineConfig& config, const RegionInfo& region,
                        const fs::path& dir, const DailySeries& smoothed,
                        const DailySeries& raw) {
  const auto corpus =
      load_corpus(dir / "corpus.jsonl", config.scrape_date, {0.0}).corpus;
  const auto tweets = load_tokenized(dir / "tokens.jsonl");
  const auto keywords = load_keywords(dir / "keywords.tsv", region.code);

  std::vector<std::size_t> order(smoothed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return smoothed.values[a] > smoothed.values[b];
  });
  order.resize(std::min(order.size(), kPeakDays));

  ordered_json peaks = ordered_json::array();
  for (const auto i : order) {
    const Date day = smoothed.date_at(i);
    ordered_json p;
    p["date"] = format_date(day);
    p["smoothed"] = smoothed.values[i];
    const auto ri = raw.index_of(day);
    p["raw"] = ri ? raw.values[*ri] : 0.0;
    ordered_json top = ordered_json::array();
    for (const auto& t :
         top_tweets_for_date(corpus, tweets, keywords, day, kPeakTweets)) {
      ordered_json row;
      row["id"] = t.record.id;
      row["hits"] = t.hits;
      row["text"] = t.record.text;
      top.push_back(std::move(row));
    }
    p["tweets"] = std::move(top);
    peaks.push_back(std::move(p));
  }
  return peaks;
}

std::string selection_label(const ordered_json& selection, SignalKind kind) {
  const auto key = std::string(to_string(kind));
  if (selection.contains(key) && selection[key].contains("winner")) {
    return "smoothed " + selection[key]["winner"].get<std::string>();
  }
  return "smoothed";
}

ordered_json fingerprint_inputs(const PipelineConfig& config,
                                const RegionInfo& region) {
  ordered_json inputs;
  inputs["dump"] = file_fingerprint(config.dump);
  inputs["registry"] = file_fingerprint(config.registry);
  inputs["stopwords"] = file_fingerprint(config.stopwords);
  inputs["lemmas"] = file_fingerprint(config.lemmas);
  for (std::size_t i = 0; i < config.slang.size(); ++i) {
    inputs["slang." + std::to_string(i)] = file_fingerprint(config.slang[i]);
  }
  if (!config.discover) {
    if (const auto kw = keyword_file_for(config, region)) {
      inputs["keywords"] = file_fingerprint(*kw);
    }
  }
  if (config.blocklist) inputs["blocklist"] = file_fingerprint(*config.blocklist);
  if (config.cases && fs::exists(*config.cases)) {
    inputs["cases"] = file_fingerprint(*config.cases);
  }
  if (config.events) inputs["events"] = file_fingerprint(*config.events);
  return inputs;
}

void stage_report(const PipelineConfig& config, const RegionInfo& region,
                  const fs::path& dir) {
  const auto raw_path = require_file(dir, "raw.csv", Stage::score);
  const auto adj_path = require_file(dir, "adjusted.csv", Stage::adjust);
  const auto sm_path = require_file(dir, "smoothed.csv", Stage::smooth);
  const auto raw = read_series_csv(raw_path);
  const auto adjusted = read_series_csv(adj_path);
  const auto smoothed = read_series_csv(sm_path, false);
  const auto selection = ordered_json::parse(
      read_text(require_file(dir, "selection.json", Stage::smooth)));

  std::vector<EventAnnotation> events;
  if (config.events) {
    events = events_for_region(load_events(*config.events), region.code);
  }
  for (const auto kind : {SignalKind::keyword_count, SignalKind::volume}) {
    PlotStyle style;
    style.title = region.name + " (" + region.code + "): " +
                  (kind == SignalKind::keyword_count ? "keyword count per day"
                                                     : "volume per day");
    const auto file =
        kind == SignalKind::keyword_count ? "plot.svg" : "plot_volume.svg";
    render_plot({series_of(raw, kind, raw_path),
                 series_of(adjusted, kind, adj_path),
                 series_of(smoothed, kind, sm_path)},
                {"raw", "adjusted", selection_label(selection, kind)}, events,
                dir / file, style);
  }

  const auto peaks =
      peaks_json(config, region, dir,
                 series_of(smoothed, SignalKind::keyword_count, sm_path),
                 series_of(raw, SignalKind::keyword_count, raw_path));
  write_text(dir / "peaks.json", peaks.dump(2));

  ordered_json manifest;
  manifest["tool"] = "burden";
  manifest["version"] = std::string(kVersion);
  manifest["region"] = region.code;
  manifest["config_dir"] = config.config_dir.string();
  ordered_json entries = ordered_json::object();
  for (const auto& [k, v] : config.entries) entries[k] = v;
  manifest["config_hash"] = fnv1a_hex(entries.dump());
  manifest["config"] = std::move(entries);
  manifest["seeds"] = {{"seed", config.seed},
                       {"lda", config.lda.seed},
                       {"w2v", config.w2v.seed}};
  manifest["inputs"] = fingerprint_inputs(config, region);
  ordered_json artifacts;
  for (const auto* name :
       {"corpus.jsonl", "tokens.jsonl", "keywords.tsv", "raw.csv",
        "adjusted.csv", "smoothed.csv", "boundary.json", "selection.json",
        "plot.svg", "plot_volume.svg", "peaks.json"}) {
    artifacts[name] = file_fingerprint(dir / name);
  }
  manifest["artifacts"] = std::move(artifacts);
  write_text(dir / "manifest.json", manifest.dump(2));
}

std::vector<std::string> ingested_regions(const PipelineConfig& config,
                                          const RegionRegistry& registry) {
  std::vector<std::string> out;
  if (!fs::exists(config.output_dir)) return out;
  for (const auto& entry : fs::directory_iterator(config.output_dir)) {
    if (!entry.is_directory()) continue;
    const auto code = entry.path().filename().string();
    if (registry.contains(code) && fs::exists(entry.path() / "corpus.jsonl")) {
      out.push_back(code);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RegionOutcome run_region(const PipelineConfig& config,
                         const RegionInfo& region, Stage stage) {
  RegionOutcome outcome;
  outcome.region = region.code;
  const auto dir = region_dir(config, region.code);
  std::vector<Stage> stages;
  if (stage == Stage::all) {
    stages.assign(std::begin(kRegionStages), std::end(kRegionStages));
  } else {
    stages.push_back(stage);
  }
  for (const auto s : stages) {
    try {
      run_region_stage(config, region, s);
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.failed_stage = std::string(to_string(s));
      outcome.error = e.what();
      break;
    }
  }
  std::error_code ec;
  if (outcome.ok) {
    fs::remove(dir / "error.txt", ec);
  } else {
    fs::create_directories(dir, ec);
    std::ofstream(dir / "error.txt")
        << outcome.failed_stage << ": " << outcome.error << '\n';
  }
  return outcome;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::normalize: return "normalize";
    case Stage::discover: return "discover";
    case Stage::score: return "score";
    case Stage::adjust: return "adjust";
    case Stage::smooth: return "smooth";
    case Stage::report: return "report";
    case Stage::all: return "all";
  }
  return "?";
}

Stage parse_stage(std::string_view text) {
  for (const auto s : {Stage::ingest, Stage::normalize, Stage::discover,
                       Stage::score, Stage::adjust, Stage::smooth,
                       Stage::report, Stage::all}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown stage '" + std::string(text) + "'");
}

int RunSummary::exit_code() const {
  return std::all_of(regions.begin(), regions.end(),
                     [](const RegionOutcome& o) { return o.ok; })
             ? 0
             : 1;
}

NormalizerConfig load_normalizer(const PipelineConfig& config) {
  NormalizerConfig n;
  try {
    n.stopwords = load_stopwords(config.stopwords);
    n.lemmas = load_token_map(config.lemmas);
    for (const auto& path : config.slang) {
      for (auto& [k, v] : load_token_map(path)) {
        const auto [it, inserted] = n.slang.emplace(k, v);
        if (!inserted && it->second != v) {
          throw ConfigError("slang entry '" + k + "' maps to both '" +
                            it->second + "' and '" + v + "'");
        }
      }
    }
    n.script_policy = config.script_policy;
    n.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("lexicons: ") + e.what());
  }
  return n;
}

fs::path region_dir(const PipelineConfig& config, const std::string& code) {
  return config.output_dir / code;
}

IngestSummary run_ingest(const PipelineConfig& config,
                         const RegionRegistry& registry,
                         const std::optional<std::string>& only_region) {
  LoadOptions load_opts;
  load_opts.max_malformed_ratio = config.max_malformed_ratio;
  auto loaded = load_corpus(config.dump, config.scrape_date, load_opts);
  IngestSummary summary;
  summary.lines = loaded.lines;
  summary.malformed = loaded.malformed;

  TweetCorpus known;
  known.provenance = loaded.corpus.provenance;
  known.scrape_date = loaded.corpus.scrape_date;
  for (auto& rec : loaded.corpus.records) {
    if (!registry.contains(rec.region)) {
      ++summary.unknown_region;
      continue;
    }
    if (only_region && rec.region != *only_region) continue;
    known.records.push_back(std::move(rec));
  }

  auto filtered =
      filter_by_query(known, config.filter_terms, config.range, registry);
  summary.matched = filtered.size();
  if (config.dedupe) {
    auto d = deduplicate(filtered, registry);
    summary.duplicates = d.removed;
    filtered = std::move(d.corpus);
  }

  for (const auto& [code, part] : partition_by_region(filtered, registry)) {
    const auto dir = region_dir(config, code);
    fs::create_directories(dir);
    write_corpus(part, dir / "corpus.jsonl");
    std::map<std::string, std::size_t> langs;
    for (const auto& rec : part.records) ++langs[rec.lang];
    ordered_json stats;
    stats["region"] = code;
    stats["records"] = part.size();
    stats["first_date"] =
        format_date(record_local_date(part.records.front(), registry));
    stats["last_date"] =
        format_date(record_local_date(part.records.back(), registry));
    stats["languages"] = langs;
    stats["range"] = {format_date(config.range.start),
                      format_date(config.range.end)};
    write_text(dir / "ingest.json", stats.dump(2));
    summary.regions.push_back(code);
  }
  return summary;
}

void run_region_stage(const PipelineConfig& config, const RegionInfo& region,
                      Stage stage) {
  const auto dir = region_dir(config, region.code);
  switch (stage) {
    case Stage::ingest: {
      const auto s = run_ingest(config, single_region(region), region.code);
      if (s.regions.empty()) {
        throw std::runtime_error("no tweets matched the filter for region " +
                                 region.code);
      }
      return;
    }
    case Stage::normalize: return stage_normalize(config, region, dir);
    case Stage::discover: return stage_discover(config, region, dir);
    case Stage::score: return stage_score(config, region, dir);
    case Stage::adjust: return stage_adjust(config, region, dir);
    case Stage::smooth: return stage_smooth(config, region, dir);
    case Stage::report: return stage_report(config, region, dir);
    case Stage::all:
      for (const auto s : kRegionStages) run_region_stage(config, region, s);
      return;
  }
}

RunSummary run_pipeline(const PipelineConfig& config,
                        const RunOptions& options) {
  RegionRegistry registry;
  try {
    registry = RegionRegistry::load_csv(config.registry);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (options.region && !registry.contains(*options.region)) {
    throw ConfigError("region '" + *options.region +
                      "' is not in the registry");
  }
  if (options.stage != Stage::ingest) load_normalizer(config);

  RunSummary summary;
  std::vector<std::string> regions;
  if (options.stage == Stage::ingest || options.stage == Stage::all) {
    fs::create_directories(config.output_dir);
    const auto ingest = run_ingest(config, registry, options.region);
    ordered_json j;
    j["lines"] = ingest.lines;
    j["malformed"] = ingest.malformed;
    j["unknown_region"] = ingest.unknown_region;
    j["matched"] = ingest.matched;
    j["duplicates"] = ingest.duplicates;
    j["regions"] = ingest.regions;
    if (!options.region) write_text(config.output_dir / "ingest.json", j.dump(2));
    regions = ingest.regions;
    if (options.region && regions.empty()) {
      summary.regions.push_back({*options.region, false, "ingest",
                                 "no tweets matched the filter"});
      return summary;
    }
    if (options.stage == Stage::ingest) {
      for (const auto& r : regions) summary.regions.push_back({r, true, {}, {}});
      return summary;
    }
  } else if (options.region) {
    regions = {*options.region};
  } else {
    regions = ingested_regions(config, registry);
    if (regions.empty()) {
      throw ConfigError("no ingested regions under '" +
                        config.output_dir.string() +
                        "'; run the ingest stage first");
    }
  }

  summary.regions.resize(regions.size());
  unsigned jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(regions.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < regions.size(); i = next++) {
      summary.regions[i] =
          run_region(config, registry.at(regions[i]), options.stage);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return summary;
}

}  // namespace burden
