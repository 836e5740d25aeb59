#include "burden/lda.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "csv_util.hpp"
#include "json.hpp"

namespace burden {

using nlohmann::json;

LdaSampler::LdaSampler(std::vector<std::vector<int>> docs,
                       std::size_t vocab_size, int topics, double alpha,
                       double beta, std::uint64_t seed)
    : docs_(std::move(docs)),
      vocab_size_(vocab_size),
      topics_(topics),
      alpha_(alpha),
      beta_(beta),
      n_kw_(static_cast<std::size_t>(topics) * vocab_size, 0),
      n_dk_(docs_.size() * static_cast<std::size_t>(topics), 0),
      n_k_(static_cast<std::size_t>(topics), 0),
      weights_(static_cast<std::size_t>(topics), 0.0),
      rng_(seed) {
  const auto K = static_cast<std::size_t>(topics_);
  z_.resize(docs_.size());
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    z_[d].resize(docs_[d].size());
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const auto w = static_cast<std::size_t>(docs_[d][i]);
      const auto k = static_cast<std::size_t>(rng_.below(K));
      z_[d][i] = static_cast<int>(k);
      ++n_kw_[k * vocab_size_ + w];
      ++n_dk_[d * K + k];
      ++n_k_[k];
      ++token_count_;
    }
  }
}

void LdaSampler::sweep() {
  const auto K = static_cast<std::size_t>(topics_);
  const double vbeta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    long* doc_counts = &n_dk_[d * K];
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const auto w = static_cast<std::size_t>(docs_[d][i]);
      const auto old_k = static_cast<std::size_t>(z_[d][i]);
      --n_kw_[old_k * vocab_size_ + w];
      --doc_counts[old_k];
      --n_k_[old_k];

      // p(z = k | rest) ∝ (n_dk + α)(n_kw + β) / (n_k + Vβ)
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += (static_cast<double>(doc_counts[k]) + alpha_) *
                 (static_cast<double>(n_kw_[k * vocab_size_ + w]) + beta_) /
                 (static_cast<double>(n_k_[k]) + vbeta);
        weights_[k] = total;
      }
      const double u = rng_.uniform() * total;
      std::size_t new_k = 0;
      while (new_k + 1 < K && weights_[new_k] <= u) ++new_k;

      z_[d][i] = static_cast<int>(new_k);
      ++n_kw_[new_k * vocab_size_ + w];
      ++doc_counts[new_k];
      ++n_k_[new_k];
    }
  }
}

Matrix LdaSampler::topic_word() const {
  const auto K = static_cast<std::size_t>(topics_);
  Matrix phi(K, vocab_size_);
  const double vbeta = static_cast<double>(vocab_size_) * beta_;
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(n_k_[k]) + vbeta;
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      phi(k, w) =
          (static_cast<double>(n_kw_[k * vocab_size_ + w]) + beta_) / denom;
    }
  }
  return phi;
}

Matrix LdaSampler::doc_topic() const {
  const auto K = static_cast<std::size_t>(topics_);
  Matrix theta(docs_.size(), K);
  const double kalpha = static_cast<double>(K) * alpha_;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    const double denom = static_cast<double>(docs_[d].size()) + kalpha;
    for (std::size_t k = 0; k < K; ++k) {
      theta(d, k) = (static_cast<double>(n_dk_[d * K + k]) + alpha_) / denom;
    }
  }
  return theta;
}

TopicModel lda_fit(std::span<const TokenizedTweet> tweets,
                   const LdaParams& params) {
  if (params.topics < 1) throw std::invalid_argument("LDA needs K >= 1");
  const double alpha = params.resolved_alpha();
  if (!(alpha > 0.0) || !(params.beta > 0.0)) {
    throw std::invalid_argument("LDA priors must be positive");
  }
  if (params.iterations < 1) {
    throw std::invalid_argument("LDA needs at least one sweep");
  }

  std::set<std::string> words;
  for (const auto& t : tweets) words.insert(t.tokens.begin(), t.tokens.end());
  if (words.empty()) throw std::invalid_argument("LDA corpus has no tokens");
  if (words.size() < static_cast<std::size_t>(params.topics)) {
    throw std::invalid_argument(
        "LDA vocabulary of " + std::to_string(words.size()) +
        " words is smaller than K = " + std::to_string(params.topics));
  }

  TopicModel model;
  model.vocab = Vocabulary({words.begin(), words.end()});
  std::vector<std::vector<int>> docs;
  docs.reserve(tweets.size());
  for (const auto& t : tweets) {
    std::vector<int> ids;
    ids.reserve(t.tokens.size());
    for (const auto& tok : t.tokens) ids.push_back(model.vocab.find(tok));
    docs.push_back(std::move(ids));
  }

  LdaSampler sampler(std::move(docs), model.vocab.size(), params.topics, alpha,
                     params.beta, params.seed);
  for (int it = 0; it < params.iterations; ++it) sampler.sweep();

  model.topics = params.topics;
  model.alpha = alpha;
  model.beta = params.beta;
  model.seed = params.seed;
  model.iterations = params.iterations;
  model.topic_word = sampler.topic_word();
  model.doc_topic = sampler.doc_topic();
  model.assignments = sampler.assignments();
  return model;
}

std::vector<std::pair<std::string, double>> lda_top_words(
    const TopicModel& model, int topic, std::size_t m) {
  if (topic < 0 || topic >= model.topics) {
    throw std::out_of_range("topic " + std::to_string(topic) +
                            " out of range [0, " +
                            std::to_string(model.topics) + ")");
  }
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const auto row = model.topic_word.row(static_cast<std::size_t>(topic));
  std::vector<std::size_t> ids(model.vocab.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const auto better = [&](std::size_t a, std::size_t b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return model.vocab.word(a) < model.vocab.word(b);
  };
  const std::size_t take = std::min(m, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<long>(take),
                    ids.end(), better);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.emplace_back(model.vocab.word(ids[i]), row[ids[i]]);
  }
  return out;
}

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw std::runtime_error("matrix data size mismatch");
  }
  return m;
}

}  // namespace

void write_topic_model(const TopicModel& model,
                       const std::filesystem::path& path) {
  json j;
  j["format"] = "burden-lda/1";
  j["topics"] = model.topics;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["seed"] = model.seed;
  j["iterations"] = model.iterations;
  j["vocab"] = model.vocab.words();
  j["topic_word"] = matrix_to_json(model.topic_word);
  j["doc_topic"] = matrix_to_json(model.doc_topic);
  j["assignments"] = model.assignments;
  auto out = detail::open_output(path.string());
  out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

TopicModel load_topic_model(const std::filesystem::path& path) {
  auto in = detail::open_input(path.string(), "topic model");
  const json j = json::parse(in);
  if (j.value("format", "") != "burden-lda/1") {
    throw std::runtime_error("'" + path.string() + "' is not a topic model");
  }
  TopicModel m;
  m.topics = j.at("topics").get<int>();
  m.alpha = j.at("alpha").get<double>();
  m.beta = j.at("beta").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.iterations = j.at("iterations").get<int>();
  m.vocab = Vocabulary(j.at("vocab").get<std::vector<std::string>>());
  m.topic_word = matrix_from_json(j.at("topic_word"));
  m.doc_topic = matrix_from_json(j.at("doc_topic"));
  m.assignments = j.at("assignments").get<std::vector<std::vector<int>>>();
  return m;
}

}  // namespace burden
