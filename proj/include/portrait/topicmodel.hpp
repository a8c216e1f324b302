#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "portrait/corpus.hpp"

namespace portrait {

// Bag-of-words corpus in integer form. Each document is one user.
struct LdaCorpus {
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<int>> docs;  // term indices into vocab
};

// Words and hashtags of each user's non-retweet posts minus the stopwords.
// Vocabulary is sorted.
LdaCorpus build_lda_corpus(std::span<const UserDocument> users, const std::set<std::string>& stopwords);

struct LdaParams {
  int k = 300;
  double alpha = 0;  // <= 0 selects 50 / k
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 42;
};

struct LdaModel {
  int k = 0;
  double alpha = 0;
  double beta = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<double>> phi;    // k x |vocab|
  std::vector<std::vector<double>> theta;  // |docs| x k

  // -1 if the term is not in the vocabulary.
  int term_index(const std::string& term) const;
};

// Collapsed Gibbs sampler. Deterministic for a given seed.
class GibbsSampler {
 public:
  // Throws std::invalid_argument on k < 1, no documents, empty vocabulary or
  // out-of-range term ids.
  GibbsSampler(const LdaCorpus& corpus, const LdaParams& params);

  void sweep();
  int sweeps_done() const { return sweeps_; }

  // phi and theta from the current counts with alpha/beta smoothing.
  LdaModel estimate() const;

  // Sum of per-topic counts; equals the corpus token count at all times.
  std::int64_t total_assignments() const;
  std::int64_t token_count() const { return token_count_; }
  const std::vector<std::vector<int>>& assignments() const { return z_; }

 private:
  double uniform();

  LdaCorpus corpus_;
  int k_;
  double alpha_;
  double beta_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  int sweeps_ = 0;
  std::int64_t token_count_ = 0;
  std::vector<std::vector<int>> z_;
  std::vector<std::vector<int>> doc_topic_;   // D x K
  std::vector<std::vector<int>> topic_term_;  // K x V
  std::vector<int> topic_total_;
  std::vector<double> probs_;
};

using SweepObserver = std::function<void(const GibbsSampler&)>;

// Runs params.iterations sweeps; the observer, when set, sees the sampler after each sweep.
LdaModel lda_train(const LdaCorpus& corpus, const LdaParams& params, const SweepObserver& observer = {});

// phi[topic][w] * log(phi[topic][w] / geometric mean over topics of phi[.][w])
double term_score(const LdaModel& model, int topic, int term_index);
double term_score(const LdaModel& model, int topic, const std::string& term);

// Highest term-score terms of a topic, ties by term.
std::vector<std::pair<std::string, double>> top_terms(const LdaModel& model, int topic, std::size_t count);

using TopicEdge = std::pair<int, int>;  // first < second

struct TopicGraph {
  std::vector<int> nodes;                 // ascending
  std::map<TopicEdge, double> edges;      // weight in (0, 1]
  std::map<int, double> centrality;
};

// A topic contributes to a document when its theta is >= tau. Each pair of
// contributing topics in a document induces an edge; the weight is the
// fraction of documents inducing it. Nodes are all topics 0..k-1.
// Throws std::invalid_argument unless tau is in (0, 1).
TopicGraph build_topic_graph(const std::vector<std::vector<double>>& theta, int k, double tau);

// Keeps edges whose weight reaches the interpolated 90th percentile and drops
// nodes left without edges. Throws std::invalid_argument on an edgeless graph.
TopicGraph upper_decile_filter(const TopicGraph& graph);

// Unweighted undirected betweenness via Brandes accumulation, each unordered
// pair counted once, unnormalized.
std::map<int, double> betweenness(const TopicGraph& graph);

struct IntermediaryTopic {
  int topic = 0;
  double centrality = 0;
  std::vector<std::pair<std::string, double>> keywords;
};

// Topics by descending centrality (ties by id) with their top term-score keywords.
std::vector<IntermediaryTopic> intermediary_topics(const LdaModel& model, const TopicGraph& graph,
                                                   std::size_t topic_count, std::size_t keyword_count);

}  // namespace portrait
