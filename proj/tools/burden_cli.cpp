// burden: runs the surveillance pipeline stages from a config file.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "burden/config.hpp"
#include "burden/pipeline.hpp"
#include "burden/report.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> region;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Pipeline config file or run manifest")
      ->required();
  cmd->add_option("--region", f.region, "Restrict to one region code");
  cmd->add_option("--seed", f.seed, "Override the random seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--jobs", f.jobs, "Regions processed in parallel (0 = auto)");
}

burden::PipelineConfig load(const CommonFlags& f) {
  auto config = burden::load_config(f.config);
  if (f.seed) {
    config.entries["seed"] = std::to_string(*f.seed);
    config.set_seed(*f.seed);
  }
  if (f.out) config.output_dir = *f.out;
  return config;
}

int run_stage(const CommonFlags& f, burden::Stage stage) {
  const auto config = load(f);
  burden::RunOptions opts;
  opts.stage = stage;
  opts.region = f.region;
  opts.jobs = f.jobs;
  const auto summary = burden::run_pipeline(config, opts);
  for (const auto& r : summary.regions) {
    if (r.ok) {
      std::cerr << r.region << ": ok\n";
    } else {
      std::cerr << r.region << ": failed in " << r.failed_stage << ": "
                << r.error << '\n';
    }
  }
  return summary.exit_code();
}

int run_inspect(const CommonFlags& f, const std::string& date, std::size_t k) {
  const auto config = load(f);
  if (!f.region) throw burden::ConfigError("inspect needs --region");
  const auto dir = burden::region_dir(config, *f.region);
  const auto corpus =
      burden::load_corpus(dir / "corpus.jsonl", config.scrape_date, {0.0})
          .corpus;
  const auto tokens = burden::load_tokenized(dir / "tokens.jsonl");
  const auto keywords = burden::load_keywords(dir / "keywords.tsv", *f.region);
  for (const auto& t : burden::top_tweets_for_date(
           corpus, tokens, keywords, burden::parse_date(date), k)) {
    std::cout << t.hits << '\t' << t.record.id << '\t'
              << burden::format_rfc3339(t.record.timestamp) << '\t'
              << t.record.text << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disease-burden signals from regional tweet corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(burden::kVersion));

  CommonFlags flags;
  std::string inspect_date;
  std::size_t inspect_k = 10;
  const std::pair<const char*, const char*> stages[] = {
      {"ingest", "Load, filter, deduplicate and partition the dump"},
      {"normalize", "Clean and tokenize each region's tweets"},
      {"discover", "Build each region's keyword list"},
      {"score", "Compute keyword count and volume per day"},
      {"adjust", "Detect and correct the truncation boundary"},
      {"smooth", "Select and apply the smoother"},
      {"report", "Write plots, peaks and the run manifest"},
      {"all", "Run every stage"}};
  for (const auto& [name, help] : stages) {
    add_common(app.add_subcommand(name, help), flags);
  }
  auto* inspect = app.add_subcommand("inspect", "Top keyword tweets of a day");
  add_common(inspect, flags);
  inspect->add_option("--date", inspect_date, "Local date YYYY-MM-DD")
      ->required();
  inspect->add_option("-k", inspect_k, "Number of tweets")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().front();
    if (sub == inspect) return run_inspect(flags, inspect_date, inspect_k);
    return run_stage(flags, burden::parse_stage(sub->get_name()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
