#include "portrait/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace portrait {

IdfTable gram_idf(std::span<const UserDocument> corpus) {
  std::vector<std::set<std::string>> docs;
  for (const auto& user : corpus)
    for (const auto& post : user.posts)
      if (!post.is_retweet) docs.push_back(gram_set(tokenize(post.text)));
  return IdfTable::from_documents(docs);
}

SparseVector post_vector(const Post& post, const IdfTable& idf) {
  return tfidf_vector(gram_counts(tokenize(post.text)), idf);
}

double relevance(const PreferenceProfile& target, const Post& candidate, const IdfTable& idf) {
  return cosine(target.as_vector, post_vector(candidate, idf));
}

double combined_score(double relevance, double gap, double lambda, std::size_t stance_count) {
  const double diversity =
      stance_count == 0 ? 0.0 : std::min(gap / std::sqrt(static_cast<double>(stance_count)), 1.0);
  return lambda * relevance + (1 - lambda) * diversity;
}

std::vector<std::string> matched_topics(const PreferenceProfile& target, const Post& post) {
  const auto grams = gram_set(tokenize(post.text));
  std::vector<std::string> out;
  for (const auto& t : target.topics)
    if (grams.contains(t.gram)) out.push_back(t.gram);
  return out;
}

std::vector<Candidate> restrict_to_grams(std::span<const Candidate> pool, const std::set<std::string>& grams) {
  std::vector<Candidate> out;
  for (const auto& c : pool) {
    const auto own = gram_set(tokenize(c.post.text));
    if (std::any_of(grams.begin(), grams.end(), [&](const std::string& g) { return own.contains(g); }))
      out.push_back(c);
  }
  return out;
}

std::vector<Recommendation> recommend(const PreferenceProfile& target, const StanceProfile& target_stance,
                                      std::span<const Candidate> pool, const IdfTable& idf,
                                      const RecommendOptions& options) {
  if (!(options.lambda >= 0 && options.lambda <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (options.top == 0) throw std::invalid_argument("top must be >= 1");

  const std::size_t stance_count = target_stance.similarities.size();
  std::unordered_set<std::string> seen;
  std::vector<Recommendation> ranked;
  for (const auto& c : pool) {
    if (c.post.author_id == target.author_id || c.author_stance.author_id == target.author_id) continue;
    if (!seen.insert(c.post.id).second) continue;
    Recommendation r;
    r.post = c.post;
    r.relevance = relevance(target, c.post, idf);
    r.gap = view_gap(target_stance, c.author_stance);
    r.combined = combined_score(r.relevance, r.gap, options.lambda, stance_count);
    ranked.push_back(std::move(r));
  }
  std::sort(ranked.begin(), ranked.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    if (a.post.timestamp != b.post.timestamp) return a.post.timestamp > b.post.timestamp;
    return a.post.id < b.post.id;
  });
  if (ranked.size() > options.top) ranked.resize(options.top);
  for (auto& r : ranked) r.matched_topics = matched_topics(target, r.post);
  return ranked;
}

}  // namespace portrait
