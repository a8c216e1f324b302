#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "portrait/corpus.hpp"
#include "portrait/vecspace.hpp"

namespace portrait {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// score = alpha_n * log(1 + count) + (1 - alpha_n) * exp(-age / tau)
struct PreferenceWeights {
  std::array<double, 3> alpha{0.5, 0.65, 0.8};  // indexed by n - 1
  double tau_seconds = 30.0 * kSecondsPerDay;
  // A shortlisted bigram/trigram hides its unigrams when its count reaches
  // this fraction of the unigram's count.
  double suppression_ratio = 0.8;
};

void validate(const PreferenceWeights& weights);

// Throws std::invalid_argument if now < last_used, count < 1 or n outside 1..3.
double score_candidate(std::int64_t count, std::int64_t last_used, std::int64_t now, int n,
                       const PreferenceWeights& weights);

struct TopicCandidate {
  std::string gram;
  std::string display;
  TokenKind kind = TokenKind::word;  // mention, hashtag or word
  int n = 1;
  std::int64_t count = 0;
  std::int64_t last_used = 0;
  double score = 0;

  bool operator==(const TopicCandidate&) const = default;
};

// Score descending, then count descending, then gram ascending.
bool ranks_before(const TopicCandidate& a, const TopicCandidate& b);

struct PreferenceProfile {
  std::string author_id;
  std::vector<TopicCandidate> topics;  // ranked, at most k
  SparseVector as_vector;              // gram -> score

  const TopicCandidate* find(const std::string& gram) const;
};

SparseVector profile_vector(const std::vector<TopicCandidate>& topics);

// All grams of the user's posts with counts and last use, unscored and
// unfiltered, keyed by gram.
std::vector<TopicCandidate> collect_candidates(const UserDocument& user);

// True for word grams that start or end with a stopword.
bool is_stopword_gram(const TopicCandidate& c, const std::set<std::string>& stopwords);

// Ranks mentions, hashtags and each word n-gram order separately, keeps a
// k-long shortlist per set, applies sub-gram suppression, then merges and
// truncates to k. `now` must not precede the user's latest post.
PreferenceProfile build_preferences(const UserDocument& user, std::size_t k, const PreferenceWeights& weights,
                                    const std::set<std::string>& stopwords, std::int64_t now);

}  // namespace portrait
