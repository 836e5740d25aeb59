// Acceptance checks for the surveillance pipeline. Prints one PASS/FAIL line
// per criterion and exits non-zero when any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "burden/config.hpp"
#include "burden/lda.hpp"
#include "burden/pipeline.hpp"
#include "burden/rng.hpp"
#include "burden/scoring.hpp"
#include "burden/smoothing.hpp"
#include "burden/truncation.hpp"
#include "burden/word2vec.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace burden;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later checks only add context.
struct Check {
  Outcome out;
  void require(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// ------------------------------------------------------------------ 1

constexpr int kRoundTripDays = 30;
constexpr int kTweetsPerDay = 100;

// Adjusted pre-boundary mean for one truncated constant-rate corpus.
struct RoundTrip {
  bool detected = false;
  double recovered = 0.0;
  double truth = 0.0;
};

const TweetCorpus& constant_rate_corpus() {
  static const TweetCorpus corpus = [] {
    const Date start = parse_date("2020-03-01");
    TweetCorpus truth;
    for (int d = 0; d < kRoundTripDays; ++d) {
      for (int i = 0; i < kTweetsPerDay; ++i) {
        TweetRecord r;
        r.id = std::to_string(d * 1000 + i);
        r.timestamp = Timestamp{add_days(start, d)} + std::chrono::hours(12) +
                      std::chrono::seconds(i);
        r.region = "R1";
        r.text = "hospital";
        r.lang = "en";
        truth.records.push_back(std::move(r));
      }
    }
    return truth;
  }();
  return corpus;
}

RoundTrip truncation_round_trip(double retention, std::uint64_t seed) {
  const Date start = parse_date("2020-03-01");
  const Date scrape = add_days(start, kRoundTripDays - 1);
  const auto& truth = constant_rate_corpus();
  const auto registry = test::utc_registry({"R1"});
  const auto kept = simulate_truncation(truth, scrape, retention, seed, registry);

  std::vector<TokenizedTweet> tweets;
  for (const auto& r : kept.records) {
    tweets.push_back(test::tokenized(r.id, format_date(local_date(r.timestamp, 0)),
                                     {"hospital"}));
  }
  KeywordSet kw("R1");
  kw.add("hospital", KeywordSource::manual);
  auto series = keyword_count_per_day(tweets, kw, {start, scrape});
  series.scrape_date = scrape;
  const auto report = detect_boundary(series);
  const auto adjusted = adjust(series, report);
  RoundTrip out;
  out.detected = report.truncation_detected;
  const auto b = *series.index_of(report.boundary_date);
  for (std::size_t i = 0; i < b; ++i) out.recovered += adjusted.values[i];
  out.recovered /= static_cast<double>(b);
  out.truth = kTweetsPerDay;
  return out;
}

Outcome criterion_truncation() {
  Check c;
  const int pre_days = kRoundTripDays - kFullVolumeDays;
  const int w = DetectOptions{}.window;
  std::string detail;
  for (double r : {0.3, 0.5, 0.8}) {
    // Delta-method standard deviation of mean(pre) * post / mean(window)
    // under Binomial(100, r) thinning with an exact post side.
    const double sigma = std::sqrt(kTweetsPerDay * (1 - r) / r *
                                   (pre_days - w) / (double(pre_days) * w));
    const auto fixture = truncation_round_trip(r, 42);
    const double fixture_z = std::abs(fixture.recovered - fixture.truth) / sigma;
    c.require(fixture.detected, "r=" + num(r) + ": truncation missed");
    c.require(fixture_z <= 3.0, "r=" + num(r) + ": error " + num(fixture_z) + " sigma");

    // The same bound across many corpora, and the bound's own calibration.
    const int trials = 2000;
    int detected = 0, within = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto rt = truncation_round_trip(r, 1000 + static_cast<std::uint64_t>(t));
      detected += rt.detected;
      within += std::abs(rt.recovered - rt.truth) <= 3.0 * sigma;
      sum += rt.recovered;
      sum_sq += rt.recovered * rt.recovered;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt(sum_sq / trials - mean * mean);
    c.require(detected == trials, "r=" + num(r) + ": truncation missed in " +
                                      std::to_string(trials - detected) + " corpora");
    c.require(within >= trials * 99 / 100,
              "r=" + num(r) + ": only " + std::to_string(within) + "/" +
                  std::to_string(trials) + " within 3 sigma");
    c.require(std::abs(sd / sigma - 1.0) <= 0.15,
              "r=" + num(r) + ": spread " + num(sd) + " vs sigma " + num(sigma));
    detail += "r=" + num(r) + " fixture " + num(fixture_z, 2) + "σ, " +
              std::to_string(within) + "/" + std::to_string(trials) +
              " within 3σ, sd/σ " + num(sd / sigma, 3) + "; ";
  }

  Rng rng(20200315);
  int false_positives = 0;
  const int series_count = 1000;
  for (int t = 0; t < series_count; ++t) {
    std::vector<double> v;
    for (int d = 0; d < kRoundTripDays; ++d) {
      v.push_back(static_cast<double>(rng.poisson(100.0)));
    }
    auto s = test::series(v);
    s.scrape_date = s.end();
    false_positives += detect_boundary(s).truncation_detected;
  }
  c.require(false_positives < series_count / 100,
            "false positives " + std::to_string(false_positives) + "/1000");
  detail += "false positives " + std::to_string(false_positives) + "/1000";
  if (c.out.pass) c.out.detail = detail;
  return c.out;
}

// ------------------------------------------------------------------ 2

std::vector<double> ref_ma(const std::vector<double>& y, int n) {
  std::vector<double> out;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const std::size_t lo = t + 1 >= static_cast<std::size_t>(n) ? t + 1 - n : 0;
    double s = 0;
    for (std::size_t j = lo; j <= t; ++j) s += y[j];
    out.push_back(s / static_cast<double>(t - lo + 1));
  }
  return out;
}

std::vector<double> ref_ses(const std::vector<double>& y, double a) {
  std::vector<double> out{y[0]};
  for (std::size_t t = 1; t < y.size(); ++t) {
    out.push_back(a * y[t] + (1 - a) * out.back());
  }
  return out;
}

std::vector<double> ref_holt(const std::vector<double>& y, double a, double b) {
  std::vector<double> level{y[0]}, trend{y[1] - y[0]};
  for (std::size_t t = 1; t < y.size(); ++t) {
    level.push_back(a * y[t] + (1 - a) * (level[t - 1] + trend[t - 1]));
    trend.push_back(b * (level[t] - level[t - 1]) + (1 - b) * trend[t - 1]);
  }
  return level;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome criterion_smoothers() {
  Check c;
  Rng rng(2);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto n = 30 + rng.below(171);
    std::vector<double> y;
    for (std::uint64_t i = 0; i < n; ++i) y.push_back(200.0 * rng.uniform());
    const auto s = test::series(y);
    for (int w = 1; w <= 7; ++w) {
      worst = std::max(worst, max_abs_diff(moving_average(s, w).values, ref_ma(y, w)));
    }
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      worst = std::max(worst, max_abs_diff(exp_smooth(s, a).values, ref_ses(y, a)));
      for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        worst = std::max(worst, max_abs_diff(holt_smooth(s, a, b).values,
                                             ref_holt(y, a, b)));
      }
    }
  }
  c.require(worst <= 1e-12, "max deviation " + num(worst));

  double linear_worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double a0 = 100 * rng.uniform(), slope = 10 * rng.uniform() - 5;
    std::vector<double> y;
    for (int i = 0; i < 120; ++i) y.push_back(a0 + slope * i);
    for (double a : {0.1, 0.5, 0.9}) {
      for (double b : {0.1, 0.5, 0.9}) {
        linear_worst = std::max(
            linear_worst, max_abs_diff(holt_smooth(test::series(y), a, b).values, y));
      }
    }
  }
  c.require(linear_worst <= 1e-9, "linear Holt deviation " + num(linear_worst));
  if (c.out.pass) {
    c.out.detail = "max deviation " + num(worst, 3) + ", linear Holt " +
                   num(linear_worst, 3);
  }
  return c.out;
}

// ------------------------------------------------------------------ 3

double direct_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  const double ma = sa / n, mb = sb / n;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Noisy epidemic curve of `days` days and cases following its MA(5).
struct EpidemicFixture {
  DailySeries signal;
  CaseSeries cases;
};

EpidemicFixture epidemic_fixture(std::uint64_t seed, int days = 90) {
  Rng rng(seed);
  const double peak = 40 + 40 * rng.uniform();
  const double mid = 35 + 20 * rng.uniform();
  const double width = 5 + 4 * rng.uniform();
  std::vector<double> y;
  for (int d = 0; d < days; ++d) {
    const double lambda = 5 + peak / (1 + std::exp(-(d - mid) / width));
    y.push_back(static_cast<double>(rng.poisson(lambda)));
  }
  EpidemicFixture f;
  f.signal = test::series(y);
  const auto ma5 = moving_average(f.signal, 5).values;
  std::vector<double> c;
  const double scale = 5 + 10 * rng.uniform();
  for (double m : ma5) {
    c.push_back(std::max(0.0, std::round(scale * m * (1 + 0.05 * rng.normal()))));
  }
  f.cases = test::cases(c);
  return f;
}

Outcome criterion_pearson() {
  Check c;
  const double exact = pearson(test::series({1, 2, 3}), test::cases({2, 4, 6}));
  c.require(exact == 1.0, "[1,2,3] vs [2,4,6] gave " + num(exact, 17));

  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto n = 3 + rng.below(60);
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < n; ++i) {
      a.push_back(100 * rng.uniform());
      b.push_back(0.3 * a.back() + 50 * rng.uniform());
    }
    worst = std::max(worst, std::abs(pearson(a, b) - direct_pearson(a, b)));
  }
  c.require(worst <= 1e-12, "oracle deviation " + num(worst));

  int invariant = 0;
  const int fixtures = 20;
  for (int t = 0; t < fixtures; ++t) {
    auto f = epidemic_fixture(300 + t);
    const auto base = select_model(f.signal, f.cases, extended_grid()).winner;
    bool same = true;
    for (auto [scale, shift] : {std::pair{0.01, 0.0}, {7.5, 1000.0}, {1e4, 3.0}}) {
      auto moved = f.cases;
      for (auto& v : moved.values) v = scale * v + shift;
      same = same && select_model(f.signal, moved, extended_grid()).winner == base;
    }
    invariant += same;
  }
  c.require(invariant == fixtures,
            "winner changed under rescaling on " +
                std::to_string(fixtures - invariant) + " fixtures");
  if (c.out.pass) {
    c.out.detail = "exact 1.0, oracle deviation " + num(worst, 3) +
                   ", winner invariant on " + std::to_string(fixtures) + " fixtures";
  }
  return c.out;
}

// ------------------------------------------------------------------ 4

Outcome criterion_selection() {
  Check c;
  int ma5 = 0;
  std::map<std::string, int> winners;
  for (int t = 0; t < 10; ++t) {
    const auto f = epidemic_fixture(400 + t);
    const auto w = select_model(f.signal, f.cases, default_grid()).winner;
    ma5 += w == SmoothingSpec::ma(5);
    ++winners[w.to_string()];
  }
  c.require(ma5 >= 8, "MA(5) won " + std::to_string(ma5) + "/10");
  std::string tally;
  for (const auto& [k, v] : winners) tally += k + "×" + std::to_string(v) + " ";
  c.out.detail = (c.out.pass ? "" : c.out.detail + "; ") + "winners " + tally;
  return c.out;
}

// ------------------------------------------------------------------ 5

Outcome criterion_lda() {
  Check c;
  const int words_per_side = 30;
  double worst_purity = 1.0;
  double worst_row = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed * 7919);
    std::vector<TokenizedTweet> docs;
    for (int d = 0; d < 200; ++d) {
      const std::string side = d % 2 ? "alpha" : "omega";
      std::vector<std::string> toks;
      for (int i = 0; i < 25; ++i) {
        toks.push_back(side + std::to_string(rng.below(words_per_side)));
      }
      docs.push_back(test::tokenized(std::to_string(d), "2020-03-01", toks));
    }
    LdaParams p;
    p.topics = 2;
    p.iterations = 300;
    p.seed = seed;
    const auto m = lda_fit(docs, p);
    std::set<std::string> majorities;
    int pure = 0;
    for (int k = 0; k < 2; ++k) {
      std::map<std::string, int> sides;
      for (const auto& [word, weight] : lda_top_words(m, k, 10)) {
        ++sides[word.substr(0, 5)];
      }
      const auto best = std::max_element(
          sides.begin(), sides.end(),
          [](const auto& a, const auto& b) { return a.second < b.second; });
      majorities.insert(best->first);
      pure += best->second;
    }
    const double purity = majorities.size() == 2 ? pure / 20.0 : 0.0;
    worst_purity = std::min(worst_purity, purity);
    for (const Matrix* mat : {&m.topic_word, &m.doc_topic}) {
      for (std::size_t r = 0; r < mat->rows; ++r) {
        double s = 0;
        for (double v : mat->row(r)) s += v;
        worst_row = std::max(worst_row, std::abs(s - 1.0));
      }
    }
  }
  c.require(worst_purity >= 0.95, "purity " + num(worst_purity));
  c.require(worst_row <= 1e-9, "row sum deviation " + num(worst_row));
  if (c.out.pass) {
    c.out.detail = "min purity " + num(worst_purity) + ", row sums within " +
                   num(worst_row, 2);
  }
  return c.out;
}

// ------------------------------------------------------------------ 6

double norm_diff_ratio(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max(std::sqrt(std::max(na, nb)), 1e-8);
  return std::sqrt(d) / scale;
}

Outcome criterion_sgns() {
  Check c;
  Rng rng(6);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto dim = 2 + rng.below(9);
    const auto nneg = 1 + rng.below(5);
    const auto draw = [&] {
      std::vector<double> v(dim);
      for (auto& x : v) x = 0.6 * rng.normal();
      return v;
    };
    std::vector<double> center = draw(), context = draw();
    std::vector<std::vector<double>> negs;
    for (std::uint64_t n = 0; n < nneg; ++n) negs.push_back(draw());

    const auto loss = [&] {
      std::vector<std::span<const double>> views(negs.begin(), negs.end());
      return sgns_loss(center, context, views);
    };
    std::vector<std::span<const double>> views(negs.begin(), negs.end());
    const auto g = sgns_gradient(center, context, views);

    const double h = 1e-5;
    const auto numeric = [&](std::vector<double>& v) {
      std::vector<double> out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double keep = v[i];
        v[i] = keep + h;
        const double up = loss();
        v[i] = keep - h;
        const double down = loss();
        v[i] = keep;
        out[i] = (up - down) / (2 * h);
      }
      return out;
    };
    worst = std::max(worst, norm_diff_ratio(g.center, numeric(center)));
    worst = std::max(worst, norm_diff_ratio(g.context, numeric(context)));
    for (std::size_t n = 0; n < negs.size(); ++n) {
      worst = std::max(worst, norm_diff_ratio(g.negatives[n], numeric(negs[n])));
    }
  }
  c.require(worst <= 1e-4, "gradient relative error " + num(worst));

  Rng corpus_rng(61);
  const std::vector<std::vector<std::string>> groups = {
      {"icu", "ventilator", "need", "urgent", "patient", "critical"},
      {"cricket", "match", "score", "team", "win", "stadium"},
      {"rice", "cook", "eat", "lunch", "dinner", "kitchen"}};
  std::vector<TokenizedTweet> mini;
  for (int i = 0; i < 300; ++i) {
    const auto& g = groups[corpus_rng.below(3)];
    std::vector<std::string> toks;
    for (int j = 0; j < 7; ++j) toks.push_back(g[corpus_rng.below(g.size())]);
    mini.push_back(test::tokenized(std::to_string(i), "2020-03-01", toks));
  }
  Word2VecParams p;
  p.dim = 16;
  p.window = 3;
  p.negatives = 5;
  p.epochs = 8;
  p.min_count = 1;
  p.seed = 5;
  p.track_loss = true;
  const auto model = w2v_train(mini, p);
  c.require(model.epoch_loss.size() == static_cast<std::size_t>(p.epochs),
            "epoch losses not recorded");
  bool monotone = true;
  for (std::size_t e = 1; e < model.epoch_loss.size(); ++e) {
    monotone = monotone && model.epoch_loss[e] <= model.epoch_loss[e - 1] * 1.01;
  }
  c.require(monotone, "epoch loss rose by more than 1%");
  if (c.out.pass) {
    c.out.detail = "max gradient error " + num(worst, 3) + ", loss " +
                   num(model.epoch_loss.front()) + " -> " +
                   num(model.epoch_loss.back());
  }
  return c.out;
}

// ------------------------------------------------------------------ 7

std::vector<TokenizedTweet> fuzz_tokens(Rng& rng, std::size_t n, int days) {
  static const std::vector<std::string> vocab = {
      "hospital", "#hospital", "medical",   "college", "medical_college",
      "bed",      "icu",       "#icu",      "shortage", "rumah",
      "sakit",    "rumah_sakit", "the",     "full",    "a"};
  std::vector<TokenizedTweet> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> t;
    for (std::uint64_t j = 0, len = rng.below(15); j < len; ++j) {
      t.push_back(vocab[rng.below(vocab.size())]);
    }
    out.push_back(test::tokenized(
        std::to_string(i),
        format_date(add_days(parse_date("2020-03-01"),
                             static_cast<int>(rng.below(days)))),
        t));
  }
  return out;
}

Outcome criterion_scoring() {
  Check c;
  const std::vector<std::string> phrases = {"hospital", "medical college", "bed",
                                            "icu", "shortage", "rumah sakit"};
  KeywordSet kw("R1");
  for (const auto& p : phrases) kw.add(p, KeywordSource::manual);
  const DateRange range{parse_date("2020-03-01"), parse_date("2020-03-07")};

  Rng rng(7);
  const auto fixture = fuzz_tokens(rng, 50, 7);
  std::vector<double> want_kc(7, 0.0), want_vol(7, 0.0);
  for (const auto& t : fixture) {
    const auto d = static_cast<std::size_t>(days_between(range.start, t.date));
    for (const auto& p : phrases) {
      want_kc[d] += static_cast<double>(test::naive_phrase_hits(t.tokens, p));
    }
    want_vol[d] += static_cast<double>(t.tokens.size());
  }
  c.require(keyword_count_per_day(fixture, kw, range).values == want_kc,
            "keyword count differs from recount");
  c.require(volume_per_day(fixture, "R1", range).values == want_vol,
            "volume differs from recount");

  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto tweets = fuzz_tokens(rng, 1 + rng.below(80), 7);
    const auto k = keyword_count_per_day(tweets, kw, range).values;
    const auto v = volume_per_day(tweets, "R1", range).values;
    for (std::size_t d = 0; d < k.size(); ++d) violations += k[d] > v[d];
  }
  c.require(violations == 0, std::to_string(violations) + " days with count > volume");
  if (c.out.pass) {
    double total = 0;
    for (double x : want_kc) total += x;
    c.out.detail = "recount exact (" + num(total) + " hits), 1000 fuzzed corpora bounded";
  }
  return c.out;
}

// ------------------------------------------------------------------ 8

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), root).string()] = test::read_file(e.path());
    }
  }
  return files;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(BURDEN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_determinism(const fs::path& work) {
  Check c;
  const auto conf = test::data_dir() / "fixture/burden.conf";
  const std::pair<const char*, const char*> runs[] = {
      {"a", "1"}, {"b", "1"}, {"c", "4"}};
  for (const auto& [name, jobs] : runs) {
    const int code = run_cli("all --config " + conf.string() + " --out " +
                             (work / name).string() + " --jobs " + jobs);
    c.require(code == 0, std::string("run ") + name + " exited " + std::to_string(code));
  }
  if (!c.out.pass) return c.out;
  const auto a = read_tree(work / "a");
  const auto b = read_tree(work / "b");
  const auto cc = read_tree(work / "c");
  c.require(a.size() > 50, "only " + std::to_string(a.size()) + " artifacts");
  const auto first_diff = [](const auto& x, const auto& y) -> std::string {
    for (const auto& [k, v] : x) {
      const auto it = y.find(k);
      if (it == y.end() || it->second != v) return k;
    }
    return x.size() == y.size() ? "" : "file set";
  };
  const auto d1 = first_diff(a, b);
  const auto d2 = first_diff(a, cc);
  c.require(d1.empty(), "repeat run differs at " + d1);
  c.require(d2.empty(), "parallel run differs at " + d2);
  if (c.out.pass) {
    c.out.detail = std::to_string(a.size()) +
                   " artifacts identical across two runs and jobs 1 vs 4";
  }
  return c.out;
}

// ------------------------------------------------------------------ 9

Outcome criterion_flat_tail(const fs::path& work) {
  Check c;
  auto config = load_config(test::data_dir() / "fixture/burden.conf");
  config.output_dir = work / "kerala";
  RunOptions o;
  o.region = "KL";
  const auto summary = run_pipeline(config, o);
  c.require(summary.exit_code() == 0, "KL run failed: " +
                                          (summary.regions.empty()
                                               ? std::string("no regions")
                                               : summary.regions[0].error));
  if (!c.out.pass) return c.out;
  const auto dir = config.output_dir / "KL";
  const auto smoothed = read_series_csv(dir / "smoothed.csv", false);
  const auto& kc = *std::find_if(smoothed.begin(), smoothed.end(), [](const auto& s) {
    return s.kind == SignalKind::keyword_count;
  });
  const Date cutoff = parse_date("2020-04-11");
  const auto cut = *kc.index_of(cutoff);
  const double peak = *std::max_element(kc.values.begin(), kc.values.begin() + cut);
  double post = 0;
  for (std::size_t i = cut; i < kc.size(); ++i) post += kc.values[i];
  post /= static_cast<double>(kc.size() - cut);
  c.require(peak > 0, "no pre-cutoff signal");
  c.require(post < 0.05 * peak,
            "post-cutoff mean " + num(post) + " vs peak " + num(peak));

  // Smoothed line is the third polyline; its tail must hug the x axis.
  const auto svg = test::read_file(dir / "plot.svg");
  const std::regex axis_re("<g id=\"axes\"[^>]*>\\s*<line x1=\"[0-9.]+\" y1=\"([0-9.]+)\"");
  const std::regex poly_re("<polyline[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  c.require(std::regex_search(svg, m, axis_re), "no x axis in plot");
  if (!c.out.pass) return c.out;
  const double baseline = std::stod(m[1]);
  std::vector<std::vector<std::pair<double, double>>> lines;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly_re);
       it != std::sregex_iterator(); ++it) {
    std::vector<std::pair<double, double>> pts;
    std::istringstream in((*it)[1].str());
    std::string p;
    while (in >> p) {
      const auto comma = p.find(',');
      pts.emplace_back(std::stod(p.substr(0, comma)), std::stod(p.substr(comma + 1)));
    }
    lines.push_back(std::move(pts));
  }
  c.require(lines.size() == 3, "expected 3 polylines, found " + std::to_string(lines.size()));
  if (!c.out.pass) return c.out;
  const auto& line = lines[2];
  c.require(line.size() == kc.size(), "smoothed polyline length mismatch");
  if (!c.out.pass) return c.out;
  double top = baseline;
  for (const auto& pt : line) top = std::min(top, pt.second);
  const double height = baseline - top;
  double tail_max = 0;
  // Past the trailing window the curve should be flat.
  for (std::size_t i = cut + 5; i < line.size(); ++i) {
    tail_max = std::max(tail_max, baseline - line[i].second);
  }
  c.require(height > 0 && tail_max <= 0.05 * height,
            "tail rises " + num(tail_max) + "px of " + num(height) + "px");
  const auto sel = nlohmann::json::parse(test::read_file(dir / "selection.json"));
  if (c.out.pass) {
    c.out.detail = "winner " + sel["keyword_count"]["winner"].get<std::string>() +
                   ", post mean " + num(post, 3) + " = " + num(100 * post / peak, 3) +
                   "% of peak " + num(peak, 3) + ", tail ≤ " + num(tail_max, 3) + "px";
  }
  return c.out;
}

// ----------------------------------------------------------------- 10

std::string join(const std::vector<std::string>& toks) {
  std::string s;
  for (const auto& t : toks) s += (s.empty() ? "" : " ") + t;
  return s;
}

std::string fuzz_text(Rng& rng) {
  static const char* const pieces[] = {
      "Hospital", "hospitals", "beds", "ICU", "rs", "RS", "faskes", "bgt",
      "overkapasitas", "kasur", "haspatal", "the", "di", "yang", "নেই",
      "হাসপাতালে", "বেড", "আইসিইউ", "।", "#covid", "@user", " ", "  ", "\t",
      "\n", ".", ",", "!", "#", "@", "'", "-", "_", "http://x.y/z",
      "www.q.com", "\xE2\x80\x8C", "\xF0\x9F\x98\xB7", "\xC3\xA9",
      "\xE0\xA4\x85", "\xC2\xA0", "\xFF", "\xE0\xA6", "9", "a", "Z"};
  std::string s;
  for (std::uint64_t i = 0, n = rng.below(25); i < n; ++i) {
    s += pieces[rng.below(sizeof(pieces) / sizeof(pieces[0]))];
  }
  return s;
}

Outcome criterion_normalization() {
  Check c;
  const auto rendered = test::normalize_golden_render();
  const auto golden = test::read_file(test::normalize_golden_path());
  std::size_t lines = std::count(golden.begin(), golden.end(), '\n');
  c.require(lines == 30, "golden has " + std::to_string(lines) + " lines");
  c.require(rendered == golden, "normalized tokens differ from golden");

  const auto config = test::shipped_normalizer();
  Rng rng(10);
  const char* langs[] = {"en", "id", "bn"};
  int failures = 0;
  const int inputs = 5000;
  for (int i = 0; i < inputs; ++i) {
    const auto lang = langs[rng.below(3)];
    const auto first = run_normalizer(
        test::tweet("f", "2020-03-05T10:00:00Z", "R1", fuzz_text(rng), lang), config);
    const auto second = run_normalizer(
        test::tweet("f", "2020-03-05T10:00:00Z", "R1", join(first.tokens), lang),
        config);
    failures += second.tokens != first.tokens;
  }
  c.require(failures == 0, std::to_string(failures) + " fuzz inputs not idempotent");
  if (c.out.pass) {
    c.out.detail = "30 golden tweets exact, " + std::to_string(inputs) +
                   " fuzz inputs idempotent";
  }
  return c.out;
}

}  // namespace

int main() {
  ::unsetenv("BURDEN_OUT_DIR");
  test::TempDir work("acceptance");
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "truncation round-trip", 30, criterion_truncation},
      {2, "smoother oracle equivalence", 0, criterion_smoothers},
      {3, "pearson correctness", 0, criterion_pearson},
      {4, "model selection picks MA(5)", 10, criterion_selection},
      {5, "LDA separability", 60, criterion_lda},
      {6, "skip-gram gradient check", 0, criterion_sgns},
      {7, "scoring oracle", 0, criterion_scoring},
      {8, "end-to-end determinism", 0, [&] { return criterion_determinism(work.path()); }},
      {9, "flat tail after cutoff", 0, [&] { return criterion_flat_tail(work.path()); }},
      {10, "normalization goldens", 0, criterion_normalization},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = cr.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (cr.limit_s > 0 && secs >= cr.limit_s && out.pass) {
      out = {false, "took " + num(secs) + " s, limit " + num(cr.limit_s) + " s"};
    }
    failed += !out.pass;
    std::printf("%s %2d %-30s %7.2fs  %s\n", out.pass ? "PASS" : "FAIL", cr.id,
                cr.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
