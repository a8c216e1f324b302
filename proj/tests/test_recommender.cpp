#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "oracles.hpp"
#include "portrait/recommender.hpp"

using namespace portrait;

namespace {

PreferenceProfile prefs(std::vector<std::pair<std::string, double>> topics) {
  PreferenceProfile p;
  p.author_id = "target";
  for (auto& [g, s] : topics) {
    TopicCandidate c;
    c.gram = g;
    c.display = g;
    c.kind = g[0] == '#' ? TokenKind::hashtag : g[0] == '@' ? TokenKind::mention : TokenKind::word;
    c.n = static_cast<int>(std::count(g.begin(), g.end(), ' ')) + 1;
    c.count = 1;
    c.score = s;
    p.topics.push_back(c);
  }
  p.as_vector = profile_vector(p.topics);
  return p;
}

StanceProfile stance(std::string author, double a, double b) {
  return {std::move(author), {{"pro", a}, {"con", b}}, a - b};
}

Candidate candidate(std::string id, std::string author, std::int64_t ts, std::string text, double a, double b) {
  return {{std::move(id), author, ts, std::move(text), false}, stance(author, a, b)};
}

struct Pool {
  std::vector<Candidate> candidates;
  IdfTable idf;
};

Pool random_pool(std::mt19937& rng, std::size_t size) {
  static const std::vector<std::string> vocab{"vida", "futbol", "gol", "#chile", "@ana", "lluvia", "calle", "musica",
                                              "derecho", "familia"};
  std::uniform_real_distribution<double> u(0, 1);
  Pool pool;
  std::vector<UserDocument> users(8);
  for (std::size_t i = 0; i < size; ++i) {
    std::string text;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int j = 0; j < len; ++j) text += vocab[rng() % vocab.size()] + " ";
    const std::string author = "a" + std::to_string(rng() % 8);
    // Authors share a stance; a few identical texts and timestamps force tie-breaks.
    std::mt19937 author_rng(static_cast<unsigned>(author.back()));
    const double s1 = u(author_rng), s2 = u(author_rng);
    pool.candidates.push_back(candidate("p" + std::to_string(i), author, 1000 + static_cast<std::int64_t>(rng() % 5),
                                        text, s1, s2));
    users[author.back() - '0'].posts.push_back(pool.candidates.back().post);
  }
  pool.idf = gram_idf(users);
  return pool;
}

// Exhaustive oracle: score every candidate, sort by the declared key.
std::vector<std::string> oracle_order(const PreferenceProfile& target, const StanceProfile& ts,
                                      const std::vector<Candidate>& pool, const IdfTable& idf, double lambda,
                                      std::size_t top) {
  std::vector<std::tuple<double, double, std::int64_t, std::string>> rows;
  std::set<std::string> seen;
  for (const auto& c : pool) {
    if (c.post.author_id == target.author_id || !seen.insert(c.post.id).second) continue;
    oracle::Counts counts;
    for (const auto& [g, _] : oracle::grams(tokenize(c.post.text), 3)) ++counts[g];
    oracle::Dense pv;
    for (const auto& [g, n] : counts) {
      const double w = static_cast<double>(n) * idf.idf(g);
      if (w > 0) pv[g] = w;
    }
    oracle::Dense tv;
    for (const auto& t : target.topics) tv[t.gram] = t.score;
    const double rel = oracle::cosine(tv, pv);
    double sq = 0;
    for (std::size_t i = 0; i < ts.similarities.size(); ++i) {
      const double d = ts.similarities[i].second - c.author_stance.similarities[i].second;
      sq += d * d;
    }
    const double div = std::min(std::sqrt(sq) / std::sqrt(2.0), 1.0);
    rows.emplace_back(-(lambda * rel + (1 - lambda) * div), -rel, -c.post.timestamp, c.post.id);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows.size() && i < top; ++i) out.push_back(std::get<3>(rows[i]));
  return out;
}

std::vector<std::string> ids(const std::vector<Recommendation>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(r.post.id);
  return out;
}

}  // namespace

TEST_CASE("relevance examples") {
  const IdfTable idf(4, {{"a", 2}, {"b", 1}, {"c", 1}});
  const auto target = prefs({{"a", 2}, {"b", 1}});
  CHECK(relevance(target, {"1", "x", 1, "zzz c", false}, idf) == 0.0);
  CHECK(relevance(prefs({{"a", 3}}), {"1", "x", 1, "a", false}, idf) == doctest::Approx(1.0).epsilon(1e-15));
  // {a: 2, b: 1} vs {a: ln2, c: 2 ln2}: 2 ln2 / (sqrt5 * sqrt5 ln2) = 0.4
  CHECK(relevance(target, {"1", "x", 1, "a c", false}, idf) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("combined score") {
  CHECK(combined_score(0.4, 0.0, 1.0, 2) == 0.4);
  CHECK(combined_score(0.4, 1.0, 0.0, 2) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(combined_score(0.0, 5.0, 0.0, 2) == 1.0);
  for (double l = 0; l <= 1.0; l += 0.125)
    CHECK(combined_score(0.3, 0.9, l, 2) ==
          doctest::Approx(l * combined_score(0.3, 0.9, 1, 2) + (1 - l) * combined_score(0.3, 0.9, 0, 2)).epsilon(1e-14));
}

TEST_CASE("recommend: argument checks and empty pool") {
  const auto target = prefs({{"a", 1}});
  const IdfTable idf(2, {{"a", 1}});
  CHECK(recommend(target, stance("target", 0, 0), {}, idf, {0.5, 3}).empty());
  CHECK_THROWS_AS(recommend(target, stance("target", 0, 0), {}, idf, {1.5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(recommend(target, stance("target", 0, 0), {}, idf, {-0.1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(recommend(target, stance("target", 0, 0), {}, idf, {0.5, 0}), std::invalid_argument);
}

TEST_CASE("recommend: lambda 1 is pure relevance order") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    auto pool = random_pool(rng, 30);
    const auto target = prefs({{"futbol", 2.0}, {"#chile", 1.5}, {"vida", 0.7}});
    const auto recs = recommend(target, stance("target", 0.5, 0.1), pool.candidates, pool.idf, {1.0, 30});
    std::vector<std::tuple<double, std::int64_t, std::string>> rows;
    for (const auto& c : pool.candidates)
      rows.emplace_back(-relevance(target, c.post, pool.idf), -c.post.timestamp, c.post.id);
    std::sort(rows.begin(), rows.end());
    std::vector<std::string> expected;
    for (const auto& r : rows) expected.push_back(std::get<2>(r));
    CHECK(ids(recs) == expected);
  }
}

TEST_CASE("recommend: lambda 0 orders by gap") {
  const auto target = prefs({{"a", 1}});
  const IdfTable idf(3, {{"a", 1}});
  std::vector<Candidate> pool{candidate("p1", "x", 1, "a", 0.1, 0.1), candidate("p2", "y", 1, "b", 0.9, 0.0),
                              candidate("p3", "z", 1, "a", 0.4, 0.3), candidate("p4", "w", 1, "c", 0.2, 0.6)};
  const auto recs = recommend(target, stance("target", 0.0, 0.0), pool, idf, {0.0, 10});
  std::vector<double> gaps;
  for (const auto& r : recs) gaps.push_back(r.gap);
  CHECK(std::is_sorted(gaps.rbegin(), gaps.rend()));
  CHECK(ids(recs) == std::vector<std::string>{"p2", "p4", "p3", "p1"});
}

TEST_CASE("recommend: lambda 0.5 matches exhaustive oracle") {
  std::mt19937 rng(5);
  const auto target = prefs({{"futbol", 2.0}, {"gol", 1.2}, {"@ana", 1.0}, {"lluvia", 0.4}});
  const auto ts = stance("target", 0.8, 0.2);
  for (int trial = 0; trial < 40; ++trial) {
    auto pool = random_pool(rng, trial < 20 ? 5 : 50);
    for (double lambda : {0.5, 0.0, 1.0, 0.25}) {
      const std::size_t top = 1 + rng() % 10;
      const auto recs = recommend(target, ts, pool.candidates, pool.idf, {lambda, top});
      CHECK(ids(recs) == oracle_order(target, ts, pool.candidates, pool.idf, lambda, top));
    }
  }
}

TEST_CASE("recommend: filtering and output invariants") {
  std::mt19937 rng(8);
  const auto target = prefs({{"vida", 1.0}, {"familia", 0.5}, {"#chile", 0.4}});
  for (int trial = 0; trial < 30; ++trial) {
    auto pool = random_pool(rng, 40);
    pool.candidates.push_back(candidate("own", "target", 2000, "vida familia", 0.1, 0.1));
    pool.candidates.push_back(pool.candidates.front());
    const std::size_t m = 1 + rng() % 12;
    const double lambda = 0.75;
    const auto recs = recommend(target, stance("target", 0.3, 0.3), pool.candidates, pool.idf, {lambda, m});
    CHECK(recs.size() <= m);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      CHECK(r.post.author_id != "target");
      CHECK(seen.insert(r.post.id).second);
      CHECK(r.relevance >= 0);
      CHECK(r.relevance <= 1);
      CHECK(r.combined == doctest::Approx(combined_score(r.relevance, r.gap, lambda, 2)).epsilon(1e-15));
      if (i > 0) CHECK(r.combined <= recs[i - 1].combined);
      const auto post_grams = oracle::gram_set(r.post.text);
      for (const auto& g : r.matched_topics) {
        CHECK(post_grams.count(g) == 1);
        CHECK(target.find(g) != nullptr);
      }
    }
  }
}

TEST_CASE("recommend: scaling token counts keeps the order") {
  std::mt19937 rng(13);
  const auto target = prefs({{"futbol", 2.0}, {"gol", 1.2}, {"calle", 0.3}});
  for (int trial = 0; trial < 20; ++trial) {
    auto pool = random_pool(rng, 25);
    auto scaled = pool.candidates;
    for (auto& c : scaled) {
      // A url breaks word runs without adding grams, so counts scale exactly.
      const std::string once = c.post.text;
      c.post.text = once + " http://x.cl " + once + " http://x.cl " + once;
    }
    const auto a = recommend(target, stance("target", 0.1, 0.9), pool.candidates, pool.idf, {1.0, 25});
    const auto b = recommend(target, stance("target", 0.1, 0.9), scaled, pool.idf, {1.0, 25});
    CHECK(ids(a) == ids(b));
  }
}

TEST_CASE("matched topics and gram restriction") {
  const auto target = prefs({{"futbol", 2.0}, {"#chile", 1.0}, {"gol", 0.5}});
  const Post post{"p", "x", 1, "Gol de #Chile en el futbol", false};
  CHECK(matched_topics(target, post) == std::vector<std::string>{"futbol", "#chile", "gol"});
  const std::vector<Candidate> pool{candidate("1", "x", 1, "gol gol", 0, 0), candidate("2", "y", 1, "nada", 0, 0),
                                    candidate("3", "z", 1, "#chile", 0, 0)};
  const auto kept = restrict_to_grams(pool, {"gol", "#chile"});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].post.id == "1");
  CHECK(kept[1].post.id == "3");
}
