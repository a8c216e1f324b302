#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "portrait/corpus.hpp"
#include "portrait/preferences.hpp"
#include "portrait/stance.hpp"
#include "portrait/vecspace.hpp"

namespace portrait {

struct Candidate {
  Post post;
  StanceProfile author_stance;
};

struct Recommendation {
  Post post;
  double relevance = 0;
  double gap = 0;
  double combined = 0;
  std::vector<std::string> matched_topics;  // target topic order
};

struct RecommendOptions {
  double lambda = 0.75;
  std::size_t top = 20;
};

// Gram document frequencies over all non-retweet posts, one document per post.
IdfTable gram_idf(std::span<const UserDocument> corpus);

// TF-IDF over the post's topic grams (hashtags, mentions, word 1..3-grams).
SparseVector post_vector(const Post& post, const IdfTable& gram_idf);

double relevance(const PreferenceProfile& target, const Post& candidate, const IdfTable& gram_idf);

// lambda * relevance + (1 - lambda) * min(gap / sqrt(stance_count), 1)
double combined_score(double relevance, double gap, double lambda, std::size_t stance_count);

std::vector<std::string> matched_topics(const PreferenceProfile& target, const Post& post);

// Candidates whose post contains at least one of the grams.
std::vector<Candidate> restrict_to_grams(std::span<const Candidate> pool, const std::set<std::string>& grams);

// Ranks by combined score (ties: relevance, newer post, post id) and returns
// at most options.top items. Posts by the target and repeated post ids are
// skipped. Throws std::invalid_argument for lambda outside [0, 1] or top == 0.
std::vector<Recommendation> recommend(const PreferenceProfile& target, const StanceProfile& target_stance,
                                      std::span<const Candidate> pool, const IdfTable& gram_idf,
                                      const RecommendOptions& options);

}  // namespace portrait
