#include "burden/word2vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "burden/rng.hpp"
#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

using nlohmann::json;

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log σ(x), computed without overflow.
double neg_log_sigmoid(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// Draws word ids with probability proportional to count^0.75.
class NoiseDistribution {
 public:
  explicit NoiseDistribution(const std::vector<std::uint64_t>& counts) {
    cdf_.reserve(counts.size());
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cdf_.push_back(total);
    }
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                 cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<std::vector<int>> encode(const EmbeddingModel& model,
                                     std::span<const TokenizedTweet> tweets) {
  std::vector<std::vector<int>> sentences;
  sentences.reserve(tweets.size());
  for (const auto& t : tweets) {
    std::vector<int> ids;
    for (const auto& tok : t.tokens) {
      const int id = model.vocab.find(tok);
      if (id >= 0) ids.push_back(id);
    }
    sentences.push_back(std::move(ids));
  }
  return sentences;
}

// Calls fn(center, context) for every pair within the window.
template <typename Fn>
void for_each_pair(const std::vector<int>& sentence, int window, Fn&& fn) {
  const auto n = static_cast<long>(sentence.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - window);
    const long hi = std::min(n - 1, i + static_cast<long>(window));
    for (long j = lo; j <= hi; ++j) {
      if (j != i) fn(sentence[static_cast<std::size_t>(i)],
                     sentence[static_cast<std::size_t>(j)]);
    }
  }
}

void check_params(const Word2VecParams& p) {
  if (p.dim < 2) throw std::invalid_argument("embedding dim must be >= 2");
  if (p.window < 1) throw std::invalid_argument("window must be >= 1");
  if (p.negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (p.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (p.min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (!(p.learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
}

}  // namespace

double sgns_loss(std::span<const double> center,
                 std::span<const double> context,
                 std::span<const std::span<const double>> negatives) {
  double loss = neg_log_sigmoid(dot(center, context));
  for (const auto& neg : negatives) loss += neg_log_sigmoid(-dot(center, neg));
  return loss;
}

SgnsGradient sgns_gradient(std::span<const double> center,
                           std::span<const double> context,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  SgnsGradient g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);
  // d/dx -log σ(x) = σ(x) - 1 ;  d/dx -log σ(-x) = σ(x)
  const double pos = sigmoid(dot(center, context)) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    g.center[i] += pos * context[i];
    g.context[i] = pos * center[i];
  }
  for (const auto& neg : negatives) {
    const double s = sigmoid(dot(center, neg));
    std::vector<double> gn(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.center[i] += s * neg[i];
      gn[i] = s * center[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

double sgns_sgd_step(std::span<double> center, std::span<double> context,
                     std::span<const std::span<double>> negatives, double lr) {
  const std::size_t d = center.size();
  std::vector<double> center_grad(d, 0.0);
  double loss = 0.0;
  const auto update = [&](std::span<double> target, bool positive) {
    const double f = dot(center, target);
    loss += neg_log_sigmoid(positive ? f : -f);
    const double g = sigmoid(f) - (positive ? 1.0 : 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      center_grad[i] += g * target[i];
      target[i] -= lr * g * center[i];
    }
  };
  update(context, true);
  for (const auto& neg : negatives) update(neg, false);
  for (std::size_t i = 0; i < d; ++i) center[i] -= lr * center_grad[i];
  return loss;
}

EmbeddingModel w2v_train(std::span<const TokenizedTweet> tweets,
                         const Word2VecParams& params) {
  check_params(params);
  std::map<std::string, std::uint64_t> freq;
  for (const auto& t : tweets) {
    for (const auto& tok : t.tokens) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [w, c] : freq) {
    if (c >= static_cast<std::uint64_t>(params.min_count)) kept.emplace_back(w, c);
  }
  if (kept.empty()) {
    throw std::invalid_argument("no token reaches min_count " +
                                std::to_string(params.min_count));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });

  EmbeddingModel model;
  std::vector<std::string> words;
  for (const auto& [w, c] : kept) {
    words.push_back(w);
    model.counts.push_back(c);
  }
  model.vocab = Vocabulary(std::move(words));
  model.dim = params.dim;
  model.params = params;

  const std::size_t V = model.vocab.size();
  const auto D = static_cast<std::size_t>(params.dim);
  Rng rng(params.seed);
  model.input_vectors = Matrix(V, D);
  for (double& x : model.input_vectors.data) {
    x = (rng.uniform() - 0.5) / static_cast<double>(D);
  }
  model.output_vectors = Matrix(V, D, 0.0);

  const auto sentences = encode(model, tweets);
  std::uint64_t pairs_per_epoch = 0;
  for (const auto& s : sentences) {
    for_each_pair(s, params.window, [&](int, int) { ++pairs_per_epoch; });
  }
  const double total_pairs =
      std::max(1.0, static_cast<double>(pairs_per_epoch) * params.epochs);
  const NoiseDistribution noise(model.counts);
  const std::uint64_t eval_seed = params.seed ^ 0x5eed5eed5eedULL;

  std::uint64_t processed = 0;
  std::vector<std::span<double>> negs;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& s : sentences) {
      for_each_pair(s, params.window, [&](int center, int context) {
        const double progress = static_cast<double>(processed++) / total_pairs;
        const double lr =
            params.learning_rate * std::max(1e-4, 1.0 - progress);
        negs.clear();
        for (int n = 0; n < params.negatives; ++n) {
          const auto id = noise.sample(rng);
          if (static_cast<int>(id) == context) continue;
          negs.push_back(model.output_vectors.row(id));
        }
        sgns_sgd_step(model.input_vectors.row(static_cast<std::size_t>(center)),
                      model.output_vectors.row(static_cast<std::size_t>(context)),
                      negs, lr);
      });
    }
    if (params.track_loss) {
      model.epoch_loss.push_back(
          w2v_corpus_loss(model, tweets, params.negatives, eval_seed));
    }
  }
  return model;
}

double w2v_corpus_loss(const EmbeddingModel& model,
                       std::span<const TokenizedTweet> tweets, int negatives,
                       std::uint64_t seed) {
  const auto sentences = encode(model, tweets);
  const NoiseDistribution noise(model.counts);
  Rng rng(seed);
  double total = 0.0;
  std::uint64_t pairs = 0;
  std::vector<std::span<const double>> negs;
  for (const auto& s : sentences) {
    for_each_pair(s, model.params.window, [&](int center, int context) {
      negs.clear();
      for (int n = 0; n < negatives; ++n) {
        const auto id = noise.sample(rng);
        if (static_cast<int>(id) == context) continue;
        negs.push_back(model.output_vectors.row(id));
      }
      total += sgns_loss(
          model.input_vectors.row(static_cast<std::size_t>(center)),
          model.output_vectors.row(static_cast<std::size_t>(context)), negs);
      ++pairs;
    });
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<std::pair<std::string, double>> w2v_nearest(
    const EmbeddingModel& model, const std::string& word, std::size_t k) {
  const int query = model.vocab.find(word);
  if (query < 0) {
    throw std::out_of_range("word '" + word + "' is not in the vocabulary");
  }
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto q = model.input_vectors.row(static_cast<std::size_t>(query));
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.vocab.size());
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    if (static_cast<int>(i) == query) continue;
    scored.emplace_back(model.vocab.word(i),
                        cosine(q, model.input_vectors.row(i)));
  }
  const auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take),
                    scored.end(), better);
  scored.resize(take);
  return scored;
}

void write_embedding(const EmbeddingModel& model,
                     const std::filesystem::path& path) {
  const auto& p = model.params;
  json j;
  j["format"] = "burden-sgns/1";
  j["params"] = {{"dim", p.dim},
                 {"window", p.window},
                 {"negatives", p.negatives},
                 {"epochs", p.epochs},
                 {"min_count", p.min_count},
                 {"learning_rate", p.learning_rate},
                 {"seed", p.seed}};
  j["vocab"] = model.vocab.words();
  j["counts"] = model.counts;
  j["input_vectors"] = model.input_vectors.data;
  j["output_vectors"] = model.output_vectors.data;
  j["epoch_loss"] = model.epoch_loss;
  auto out = detail::open_output(path.string());
  out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

EmbeddingModel load_embedding(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "embedding");
  const json j = json::parse(in);
  if (j.value("format", "") != "burden-sgns/1") {
    throw std::runtime_error("'" + path.string() + "' is not an embedding");
  }
  EmbeddingModel m;
  const auto& p = j.at("params");
  m.params.dim = p.at("dim").get<int>();
  m.params.window = p.at("window").get<int>();
  m.params.negatives = p.at("negatives").get<int>();
  m.params.epochs = p.at("epochs").get<int>();
  m.params.min_count = p.at("min_count").get<int>();
  m.params.learning_rate = p.at("learning_rate").get<double>();
  m.params.seed = p.at("seed").get<std::uint64_t>();
  m.dim = m.params.dim;
  m.vocab = Vocabulary(j.at("vocab").get<std::vector<std::string>>());
  m.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  const std::size_t V = m.vocab.size();
  const auto D = static_cast<std::size_t>(m.dim);
  m.input_vectors = Matrix(V, D);
  m.output_vectors = Matrix(V, D);
  m.input_vectors.data = j.at("input_vectors").get<std::vector<double>>();
  m.output_vectors.data = j.at("output_vectors").get<std::vector<double>>();
  if (m.input_vectors.data.size() != V * D ||
      m.output_vectors.data.size() != V * D || m.counts.size() != V) {
    throw std::runtime_error("embedding '" + path.string() +
                             "' has inconsistent sizes");
  }
  m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
  return m;
}

}  // namespace burden
