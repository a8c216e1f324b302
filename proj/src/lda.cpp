#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "portrait/topicmodel.hpp"

namespace portrait {

LdaCorpus build_lda_corpus(std::span<const UserDocument> users, const std::set<std::string>& stopwords) {
  std::vector<std::vector<std::string>> raw;
  std::set<std::string> vocab;
  LdaCorpus out;
  for (const auto& user : users) {
    std::vector<std::string> terms;
    for (const auto& post : user.posts) {
      if (post.is_retweet) continue;
      for (auto& tok : tokenize(post.text)) {
        if (tok.kind != TokenKind::word && tok.kind != TokenKind::hashtag) continue;
        if (tok.kind == TokenKind::word && stopwords.contains(tok.surface)) continue;
        vocab.insert(tok.surface);
        terms.push_back(std::move(tok.surface));
      }
    }
    out.doc_ids.push_back(user.author_id);
    raw.push_back(std::move(terms));
  }
  out.vocab.assign(vocab.begin(), vocab.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < out.vocab.size(); ++i) index[out.vocab[i]] = static_cast<int>(i);
  for (const auto& terms : raw) {
    std::vector<int> ids;
    ids.reserve(terms.size());
    for (const auto& t : terms) ids.push_back(index.at(t));
    out.docs.push_back(std::move(ids));
  }
  return out;
}

int LdaModel::term_index(const std::string& term) const {
  auto it = std::lower_bound(vocab.begin(), vocab.end(), term);
  if (it != vocab.end() && *it == term) return static_cast<int>(it - vocab.begin());
  // Vocabularies loaded from elsewhere need not be sorted.
  auto lin = std::find(vocab.begin(), vocab.end(), term);
  return lin == vocab.end() ? -1 : static_cast<int>(lin - vocab.begin());
}

GibbsSampler::GibbsSampler(const LdaCorpus& corpus, const LdaParams& params)
    : corpus_(corpus),
      k_(params.k),
      alpha_(params.alpha > 0 ? params.alpha : 50.0 / params.k),
      beta_(params.beta),
      seed_(params.seed),
      rng_(params.seed) {
  if (k_ < 1) throw std::invalid_argument("LDA needs k >= 1");
  if (corpus_.docs.empty()) throw std::invalid_argument("LDA needs at least one document");
  if (corpus_.vocab.empty()) throw std::invalid_argument("LDA vocabulary is empty");
  if (!(beta_ > 0)) throw std::invalid_argument("LDA beta must be positive");
  const auto v = static_cast<int>(corpus_.vocab.size());
  const auto k = static_cast<std::size_t>(k_);

  doc_topic_.assign(corpus_.docs.size(), std::vector<int>(k, 0));
  topic_term_.assign(k, std::vector<int>(static_cast<std::size_t>(v), 0));
  topic_total_.assign(k, 0);
  probs_.assign(k, 0.0);
  z_.resize(corpus_.docs.size());
  for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
    const auto& doc = corpus_.docs[d];
    z_[d].resize(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const int w = doc[i];
      if (w < 0 || w >= v) throw std::invalid_argument("LDA term id out of range");
      const int t = std::min(static_cast<int>(uniform() * k_), k_ - 1);
      z_[d][i] = t;
      ++doc_topic_[d][t];
      ++topic_term_[t][w];
      ++topic_total_[t];
      ++token_count_;
    }
  }
}

double GibbsSampler::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void GibbsSampler::sweep() {
  const double v_beta = static_cast<double>(corpus_.vocab.size()) * beta_;
  for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
    const auto& doc = corpus_.docs[d];
    auto& nd = doc_topic_[d];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const int w = doc[i];
      int t = z_[d][i];
      --nd[t];
      --topic_term_[t][w];
      --topic_total_[t];

      double total = 0;
      for (int j = 0; j < k_; ++j) {
        total += (nd[j] + alpha_) * (topic_term_[j][w] + beta_) / (topic_total_[j] + v_beta);
        probs_[j] = total;
      }
      const double u = uniform() * total;
      t = static_cast<int>(std::upper_bound(probs_.begin(), probs_.end(), u) - probs_.begin());
      t = std::min(t, k_ - 1);

      z_[d][i] = t;
      ++nd[t];
      ++topic_term_[t][w];
      ++topic_total_[t];
    }
  }
  ++sweeps_;
}

std::int64_t GibbsSampler::total_assignments() const {
  return std::accumulate(topic_total_.begin(), topic_total_.end(), std::int64_t{0});
}

LdaModel GibbsSampler::estimate() const {
  LdaModel m;
  m.k = k_;
  m.alpha = alpha_;
  m.beta = beta_;
  m.iterations = sweeps_;
  m.seed = seed_;
  m.vocab = corpus_.vocab;
  m.doc_ids = corpus_.doc_ids;
  const double v = static_cast<double>(corpus_.vocab.size());
  m.phi.resize(static_cast<std::size_t>(k_));
  for (int t = 0; t < k_; ++t) {
    auto& row = m.phi[t];
    row.resize(corpus_.vocab.size());
    const double denom = topic_total_[t] + v * beta_;
    for (std::size_t w = 0; w < row.size(); ++w) row[w] = (topic_term_[t][w] + beta_) / denom;
  }
  m.theta.resize(corpus_.docs.size());
  for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
    auto& row = m.theta[d];
    row.resize(static_cast<std::size_t>(k_));
    const double denom = static_cast<double>(corpus_.docs[d].size()) + k_ * alpha_;
    for (int t = 0; t < k_; ++t) row[t] = (doc_topic_[d][t] + alpha_) / denom;
  }
  return m;
}

LdaModel lda_train(const LdaCorpus& corpus, const LdaParams& params, const SweepObserver& observer) {
  if (params.iterations < 1) throw std::invalid_argument("LDA needs at least one iteration");
  GibbsSampler sampler(corpus, params);
  for (int it = 0; it < params.iterations; ++it) {
    sampler.sweep();
    if (observer) observer(sampler);
  }
  return sampler.estimate();
}

double term_score(const LdaModel& model, int topic, int term_index) {
  if (topic < 0 || topic >= model.k) throw std::out_of_range("topic out of range");
  if (term_index < 0 || static_cast<std::size_t>(term_index) >= model.vocab.size())
    throw std::out_of_range("term out of range");
  double mean_log = 0;
  for (int j = 0; j < model.k; ++j) mean_log += std::log(model.phi[j][term_index]);
  mean_log /= model.k;
  const double p = model.phi[topic][term_index];
  return p * (std::log(p) - mean_log);
}

double term_score(const LdaModel& model, int topic, const std::string& term) {
  const int idx = model.term_index(term);
  if (idx < 0) throw std::out_of_range("term not in vocabulary: " + term);
  return term_score(model, topic, idx);
}

std::vector<std::pair<std::string, double>> top_terms(const LdaModel& model, int topic, std::size_t count) {
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.vocab.size());
  for (std::size_t w = 0; w < model.vocab.size(); ++w)
    scored.emplace_back(model.vocab[w], term_score(model, topic, static_cast<int>(w)));
  const std::size_t n = std::min(count, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  scored.resize(n);
  return scored;
}

}  // namespace portrait
