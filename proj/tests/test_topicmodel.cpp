#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "portrait/topicmodel.hpp"

using namespace portrait;

namespace {

// Two disjoint vocabularies; each document draws from one of them.
LdaCorpus planted(std::size_t docs, std::size_t length, std::uint32_t seed, std::vector<int>* truth = nullptr) {
  std::mt19937 rng(seed);
  LdaCorpus c;
  for (int w = 0; w < 20; ++w) c.vocab.push_back("w" + std::to_string(w));
  for (std::size_t d = 0; d < docs; ++d) {
    const int topic = static_cast<int>(d % 2);
    c.doc_ids.push_back("d" + std::to_string(d));
    std::vector<int> doc;
    for (std::size_t i = 0; i < length; ++i) {
      doc.push_back(topic * 10 + static_cast<int>(rng() % 10));
      if (truth) truth->push_back(topic);
    }
    c.docs.push_back(doc);
  }
  return c;
}

LdaModel toy_model(std::vector<std::vector<double>> phi) {
  LdaModel m;
  m.k = static_cast<int>(phi.size());
  for (std::size_t w = 0; w < phi[0].size(); ++w) m.vocab.push_back("t" + std::to_string(w));
  m.phi = std::move(phi);
  return m;
}

TopicGraph graph_of(std::vector<int> nodes, std::vector<std::pair<int, int>> edges) {
  TopicGraph g;
  g.nodes = std::move(nodes);
  for (auto [a, b] : edges) g.edges[{std::min(a, b), std::max(a, b)}] = 1.0;
  return g;
}

void check_stochastic(const LdaModel& m) {
  for (const auto& row : m.phi) {
    double s = 0;
    for (double p : row) {
      REQUIRE(p > 0);
      s += p;
    }
    REQUIRE(std::abs(s - 1) <= 1e-6);
  }
  for (const auto& row : m.theta) {
    double s = 0;
    for (double p : row) {
      REQUIRE(p > 0);
      s += p;
    }
    REQUIRE(std::abs(s - 1) <= 1e-6);
  }
}

}  // namespace

TEST_CASE("lda: k = 1 degenerates to smoothed term frequencies") {
  LdaCorpus c;
  c.vocab = {"a", "b", "c"};
  c.doc_ids = {"x", "y"};
  c.docs = {{0, 0, 1}, {0, 2}};
  LdaParams p;
  p.k = 1;
  p.iterations = 5;
  const auto m = lda_train(c, p);
  for (const auto& row : m.theta) CHECK(row == std::vector<double>{1.0});
  const double beta = p.beta;
  const std::vector<double> counts{3, 1, 1};
  for (int w = 0; w < 3; ++w) CHECK(m.phi[0][w] == doctest::Approx((counts[w] + beta) / (5 + 3 * beta)).epsilon(1e-14));
  CHECK(m.alpha == 50.0);
}

TEST_CASE("lda: planted topics are recovered") {
  std::vector<int> truth;
  const auto c = planted(60, 30, 3, &truth);
  LdaParams p;
  p.k = 2;
  p.iterations = 200;
  p.seed = 11;
  GibbsSampler sampler(c, p);
  for (int i = 0; i < p.iterations; ++i) sampler.sweep();
  std::vector<int> predicted;
  for (const auto& doc : sampler.assignments()) predicted.insert(predicted.end(), doc.begin(), doc.end());
  CHECK(oracle::best_permutation_purity(truth, predicted, 2) >= 0.9);
}

TEST_CASE("lda: fixed seed is bitwise reproducible") {
  const auto c = planted(20, 15, 9);
  LdaParams p;
  p.k = 3;
  p.iterations = 30;
  p.seed = 5;
  const auto a = lda_train(c, p);
  const auto b = lda_train(c, p);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  p.seed = 6;
  CHECK(lda_train(c, p).phi != a.phi);
}

TEST_CASE("lda: stochastic rows and conserved token count after every sweep") {
  const auto c = planted(16, 12, 1);
  LdaParams p;
  p.k = 4;
  p.iterations = 25;
  int sweeps = 0;
  lda_train(c, p, [&](const GibbsSampler& s) {
    ++sweeps;
    REQUIRE(s.total_assignments() == s.token_count());
    REQUIRE(s.token_count() == 16 * 12);
    check_stochastic(s.estimate());
  });
  CHECK(sweeps == 25);
}

TEST_CASE("lda: input validation") {
  LdaCorpus empty_vocab;
  empty_vocab.doc_ids = {"x"};
  empty_vocab.docs = {{}};
  CHECK_THROWS_AS(GibbsSampler(empty_vocab, {}), std::invalid_argument);
  auto c = planted(2, 3, 1);
  LdaParams p;
  p.k = 0;
  CHECK_THROWS_AS(GibbsSampler(c, p), std::invalid_argument);
  c.docs[0][0] = 99;
  CHECK_THROWS_AS(GibbsSampler(c, {}), std::invalid_argument);
  LdaCorpus none;
  none.vocab = {"a"};
  CHECK_THROWS_AS(GibbsSampler(none, {}), std::invalid_argument);
}

TEST_CASE("lda corpus keeps words and hashtags of own posts") {
  UserDocument u;
  u.author_id = "u";
  u.posts = {{"1", "u", 1, "Hola #Chile @ana http://x.cl de", false}, {"2", "u", 2, "RT @b: ignorado", true}};
  const auto c = build_lda_corpus(std::vector<UserDocument>{u}, {"de"});
  CHECK(c.vocab == std::vector<std::string>{"#chile", "hola"});
  CHECK(c.doc_ids == std::vector<std::string>{"u"});
  REQUIRE(c.docs.size() == 1);
  CHECK(c.docs[0].size() == 2);
}

TEST_CASE("term score examples") {
  const auto uniform = toy_model({{0.5, 0.5}, {0.5, 0.5}});
  CHECK(term_score(uniform, 0, 0) == 0.0);
  CHECK(term_score(uniform, 1, "t1") == 0.0);
  const auto m = toy_model({{0.4, 0.6}, {0.1, 0.9}});
  CHECK(term_score(m, 0, 0) == doctest::Approx(0.4 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("term score matches direct formula on a 3-topic toy model") {
  const auto m = toy_model({{0.5, 0.2, 0.2, 0.1}, {0.1, 0.1, 0.4, 0.4}, {0.25, 0.25, 0.25, 0.25}});
  for (int k = 0; k < 3; ++k)
    for (int w = 0; w < 4; ++w) CHECK(std::abs(term_score(m, k, w) - oracle::term_score(m.phi, k, w)) <= 1e-12);
  const auto top = top_terms(m, 0, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "t0");
  CHECK(top[0].second >= top[1].second);
}

TEST_CASE("topic graph examples") {
  std::vector<std::vector<double>> one{{0, 0, 0, 0.5, 0, 0, 0, 0.5}};
  const auto g = build_topic_graph(one, 8, 0.05);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges.begin()->first == TopicEdge{3, 7});
  CHECK(g.edges.begin()->second == 1.0);
  CHECK(g.nodes.size() == 8);

  std::vector<std::vector<double>> lonely{{0.97, 0.01, 0.02}, {0.01, 0.98, 0.01}};
  CHECK(build_topic_graph(lonely, 3, 0.05).edges.empty());
  CHECK_THROWS_AS(build_topic_graph(one, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_topic_graph(one, 8, 1.0), std::invalid_argument);
}

TEST_CASE("topic graph matches pair enumeration oracle") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 7);
    std::vector<std::vector<double>> theta(10, std::vector<double>(k));
    for (auto& row : theta) {
      double s = 0;
      for (auto& x : row) s += x = std::pow(u(rng), 3);
      for (auto& x : row) x /= s;
    }
    const double tau = 0.05 + 0.2 * u(rng);
    const auto g = build_topic_graph(theta, k, tau);
    const auto expected = oracle::topic_edges(theta, tau);
    REQUIRE(g.edges.size() == expected.size());
    for (const auto& [e, w] : expected) {
      CHECK(e.first != e.second);
      CHECK(g.edges.at(e) == doctest::Approx(w).epsilon(1e-15));
      CHECK(w > 0);
      CHECK(w <= 1);
    }
  }
}

TEST_CASE("upper decile filter") {
  TopicGraph equal;
  for (int i = 0; i < 20; ++i) equal.edges[{i, i + 1}] = 0.5;
  for (int i = 0; i <= 20; ++i) equal.nodes.push_back(i);
  CHECK(upper_decile_filter(equal).edges.size() == 20);

  TopicGraph ramp;
  std::vector<double> weights;
  for (int i = 0; i < 20; ++i) {
    ramp.edges[{i, i + 1}] = (i + 1) / 20.0;
    weights.push_back((i + 1) / 20.0);
  }
  for (int i = 0; i <= 20; ++i) ramp.nodes.push_back(i);
  const double threshold = oracle::quantile7(weights, 0.9);
  const auto kept = upper_decile_filter(ramp);
  std::size_t expected = 0;
  for (double w : weights) expected += w >= threshold;
  CHECK(kept.edges.size() == expected);
  CHECK(kept.edges.size() == 2);
  CHECK(kept.nodes == std::vector<int>{18, 19, 20});

  TopicGraph single;
  single.nodes = {0, 1, 2};
  single.edges[{0, 2}] = 0.1;
  const auto s = upper_decile_filter(single);
  CHECK(s.edges.size() == 1);
  CHECK(s.nodes == std::vector<int>{0, 2});

  TopicGraph none;
  none.nodes = {0, 1};
  CHECK_THROWS_AS(upper_decile_filter(none), std::invalid_argument);
}

TEST_CASE("betweenness closed forms") {
  const auto path = betweenness(graph_of({0, 1, 2}, {{0, 1}, {1, 2}}));
  CHECK(path.at(0) == 0.0);
  CHECK(path.at(1) == 1.0);
  CHECK(path.at(2) == 0.0);

  const auto k4 = betweenness(graph_of({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  for (const auto& [_, b] : k4) CHECK(b == 0.0);

  // Path of n nodes: node i lies on i * (n - 1 - i) pairs.
  std::vector<int> nodes;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 7; ++i) {
    nodes.push_back(i);
    if (i) edges.emplace_back(i - 1, i);
  }
  const auto long_path = betweenness(graph_of(nodes, edges));
  for (int i = 0; i < 7; ++i) CHECK(long_path.at(i) == doctest::Approx(i * (6.0 - i)).epsilon(1e-15));
}

TEST_CASE("betweenness matches all-shortest-paths oracle") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(i * 3);  // sparse ids
    std::set<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng() % 100 < 35) edges.insert({nodes[a], nodes[b]});
    TopicGraph g;
    g.nodes = nodes;
    for (const auto& e : edges) g.edges[e] = 1.0;
    const auto got = betweenness(g);
    const auto expected = oracle::betweenness(nodes, edges);
    for (int v : nodes) {
      CHECK(std::abs(got.at(v) - expected.at(v)) <= 1e-12);
      int degree = 0;
      for (const auto& [a, b] : edges) degree += (a == v) + (b == v);
      if (degree <= 1) CHECK(got.at(v) == 0.0);
    }
  }
}

TEST_CASE("intermediary topics ranked by centrality") {
  auto m = toy_model({{0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}, {0.3, 0.4, 0.3}});
  auto g = graph_of({0, 1, 2}, {{0, 2}, {2, 1}});
  g.centrality = betweenness(g);
  const auto report = intermediary_topics(m, g, 2, 2);
  REQUIRE(report.size() == 2);
  CHECK(report[0].topic == 2);
  CHECK(report[0].centrality == 1.0);
  CHECK(report[1].topic == 0);
  CHECK(report[0].keywords.size() == 2);
}
