#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "burden/lda.hpp"
#include "burden/rng.hpp"
#include "burden/scoring.hpp"
#include "burden/smoothing.hpp"
#include "burden/text.hpp"
#include "burden/truncation.hpp"
#include "burden/word2vec.hpp"

namespace {

using namespace burden;

std::vector<std::vector<int>> random_docs(std::size_t docs, std::size_t len,
                                          std::size_t vocab) {
  Rng rng(1);
  std::vector<std::vector<int>> out(docs);
  for (auto& d : out) {
    for (std::size_t i = 0; i < len; ++i) {
      d.push_back(static_cast<int>(rng.below(vocab)));
    }
  }
  return out;
}

std::vector<TokenizedTweet> random_tweets(std::size_t n, std::size_t vocab) {
  Rng rng(2);
  std::vector<TokenizedTweet> out;
  for (std::size_t i = 0; i < n; ++i) {
    TokenizedTweet t;
    t.source_id = std::to_string(i);
    t.region = "R1";
    t.date = add_days(parse_date("2020-03-01"), static_cast<int>(rng.below(60)));
    for (int j = 0; j < 12; ++j) {
      t.tokens.push_back("w" + std::to_string(rng.below(vocab)));
    }
    t.raw_words = t.tokens.size();
    out.push_back(std::move(t));
  }
  return out;
}

void BM_LdaSweep(benchmark::State& state) {
  const auto docs = random_docs(2000, 15, 2000);
  LdaSampler sampler(docs, 2000, static_cast<int>(state.range(0)), 0.1, 0.01, 3);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(state.iterations() * 2000 * 15);
}
BENCHMARK(BM_LdaSweep)->Arg(10)->Arg(50);

void BM_Word2VecEpoch(benchmark::State& state) {
  const auto tweets = random_tweets(2000, 500);
  Word2VecParams p;
  p.dim = static_cast<int>(state.range(0));
  p.epochs = 1;
  p.min_count = 1;
  for (auto _ : state) benchmark::DoNotOptimize(w2v_train(tweets, p));
  state.SetItemsProcessed(state.iterations() * 2000 * 12);
}
BENCHMARK(BM_Word2VecEpoch)->Arg(32)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Normalizer(benchmark::State& state) {
  NormalizerConfig c;
  c.stopwords = {"the", "at", "is", "di", "yang"};
  c.lemmas = {{"beds", "bed"}, {"hospitals", "hospital"}};
  c.slang = {{"rs", "rumah_sakit"}, {"বেড", "bed"}};
  c.script_policy = {{"en", ScriptPolicy::latin_only()},
                     {"bn", ScriptPolicy::allow(Script::bengali)}};
  TweetRecord en{"1", parse_rfc3339("2020-04-01T10:00:00Z"), "R1",
                 "No beds at the hospitals, RS penuh #covid https://t.co/x @desk",
                 "en"};
  TweetRecord bn{"2", parse_rfc3339("2020-04-01T10:00:00Z"), "R1",
                 "হাসপাতালে কোনো বেড নেই #covid19 haspatal full", "bn"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_normalizer(en, c));
    benchmark::DoNotOptimize(run_normalizer(bn, c));
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_Normalizer);

void BM_KeywordCount(benchmark::State& state) {
  const auto tweets = random_tweets(20000, 300);
  KeywordSet kw("R1");
  for (int i = 0; i < 20; ++i) kw.add("w" + std::to_string(i), KeywordSource::manual);
  kw.add("w1 w2", KeywordSource::manual);
  const DateRange range{parse_date("2020-03-01"), parse_date("2020-04-29")};
  for (auto _ : state) {
    benchmark::DoNotOptimize(keyword_count_per_day(tweets, kw, range));
  }
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_KeywordCount)->Unit(benchmark::kMillisecond);

DailySeries noisy_series(std::size_t n) {
  Rng rng(4);
  DailySeries s;
  s.region = "R1";
  s.start = parse_date("2020-03-01");
  for (std::size_t i = 0; i < n; ++i) {
    s.values.push_back(static_cast<double>(rng.poisson(30.0 + 0.2 * i)));
  }
  return s;
}

void BM_Smooth(benchmark::State& state) {
  const auto s = noisy_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(moving_average(s, 5));
    benchmark::DoNotOptimize(exp_smooth(s, 0.3));
    benchmark::DoNotOptimize(holt_smooth(s, 0.3, 0.1));
  }
}
BENCHMARK(BM_Smooth)->Arg(90)->Arg(1000);

void BM_SelectExtendedGrid(benchmark::State& state) {
  const auto s = noisy_series(90);
  CaseSeries c;
  c.region = "R1";
  c.start = s.start;
  c.values = moving_average(s, 5).values;
  const auto grid = extended_grid();
  for (auto _ : state) benchmark::DoNotOptimize(select_model(s, c, grid));
}
BENCHMARK(BM_SelectExtendedGrid);

void BM_DetectAndAdjust(benchmark::State& state) {
  auto s = noisy_series(90);
  s.scrape_date = s.end();
  for (auto _ : state) {
    const auto r = detect_boundary(s);
    benchmark::DoNotOptimize(adjust(s, r));
  }
}
BENCHMARK(BM_DetectAndAdjust);

}  // namespace

BENCHMARK_MAIN();
