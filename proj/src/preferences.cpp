#include "portrait/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace portrait {

void validate(const PreferenceWeights& weights) {
  for (double a : weights.alpha)
    if (!(a >= 0 && a <= 1)) throw std::invalid_argument("preference alpha must lie in [0, 1]");
  if (!(weights.tau_seconds > 0)) throw std::invalid_argument("preference tau must be positive");
  if (!(weights.suppression_ratio >= 0)) throw std::invalid_argument("suppression ratio must be nonnegative");
}

double score_candidate(std::int64_t count, std::int64_t last_used, std::int64_t now, int n,
                       const PreferenceWeights& weights) {
  if (n < 1 || n > 3) throw std::invalid_argument("n-gram order must be in 1..3");
  if (count < 1) throw std::invalid_argument("candidate count must be >= 1");
  if (now < last_used) throw std::invalid_argument("score_candidate: now precedes last use");
  const double alpha = weights.alpha[static_cast<std::size_t>(n - 1)];
  const double age = static_cast<double>(now - last_used);
  return alpha * std::log1p(static_cast<double>(count)) + (1 - alpha) * std::exp(-age / weights.tau_seconds);
}

bool ranks_before(const TopicCandidate& a, const TopicCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.count != b.count) return a.count > b.count;
  return a.gram < b.gram;
}

const TopicCandidate* PreferenceProfile::find(const std::string& gram) const {
  for (const auto& t : topics)
    if (t.gram == gram) return &t;
  return nullptr;
}

SparseVector profile_vector(const std::vector<TopicCandidate>& topics) {
  std::map<std::string, double> w;
  for (const auto& t : topics) w[t.gram] = t.score;
  return SparseVector(std::move(w));
}

std::vector<TopicCandidate> collect_candidates(const UserDocument& user) {
  std::map<std::string, TopicCandidate> by_gram;
  for (const auto& post : user.posts) {
    auto tokens = tokenize(post.text);
    // The "RT" marker says nothing about the user's topics.
    if (post.is_retweet && !tokens.empty() && tokens.front().kind == TokenKind::word && tokens.front().surface == "rt")
      tokens.erase(tokens.begin());
    for_each_gram(tokens, 3, [&](const GramOccurrence& g) {
      auto [it, fresh] = by_gram.try_emplace(g.gram);
      auto& c = it->second;
      if (fresh) {
        c.gram = g.gram;
        c.kind = g.kind;
        c.n = g.n;
      }
      ++c.count;
      // Posts arrive oldest first, so the latest display form wins.
      if (post.timestamp >= c.last_used) {
        c.last_used = post.timestamp;
        c.display = g.display;
      }
    });
  }
  std::vector<TopicCandidate> out;
  out.reserve(by_gram.size());
  for (auto& [gram, c] : by_gram) out.push_back(std::move(c));
  return out;
}

bool is_stopword_gram(const TopicCandidate& c, const std::set<std::string>& stopwords) {
  if (c.kind != TokenKind::word || stopwords.empty()) return false;
  const auto first_end = c.gram.find(' ');
  const auto last_begin = c.gram.rfind(' ');
  const std::string first = c.gram.substr(0, first_end);
  const std::string last = last_begin == std::string::npos ? c.gram : c.gram.substr(last_begin + 1);
  return stopwords.contains(first) || stopwords.contains(last);
}

namespace {

std::vector<std::string> split_words(const std::string& gram) {
  std::vector<std::string> out;
  std::istringstream in(gram);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

PreferenceProfile build_preferences(const UserDocument& user, std::size_t k, const PreferenceWeights& weights,
                                    const std::set<std::string>& stopwords, std::int64_t now) {
  if (k < 1) throw std::invalid_argument("build_preferences: k must be >= 1");
  validate(weights);

  // 0: mentions, 1: hashtags, 2..4: word n-grams for n = 1..3
  std::array<std::vector<TopicCandidate>, 5> sets;
  for (auto& c : collect_candidates(user)) {
    if (is_stopword_gram(c, stopwords)) continue;
    c.score = score_candidate(c.count, c.last_used, now, c.n, weights);
    const std::size_t slot = c.kind == TokenKind::mention ? 0 : c.kind == TokenKind::hashtag ? 1 : 1 + c.n;
    sets[slot].push_back(std::move(c));
  }
  for (auto& set : sets) {
    std::sort(set.begin(), set.end(), ranks_before);
    if (set.size() > k) set.resize(k);
  }

  auto& unigrams = sets[2];
  std::set<std::string> suppressed;
  for (std::size_t slot = 3; slot <= 4; ++slot) {
    for (const auto& longer : sets[slot]) {
      for (const auto& word : split_words(longer.gram)) {
        for (const auto& u : unigrams) {
          if (u.gram == word &&
              static_cast<double>(longer.count) >= weights.suppression_ratio * static_cast<double>(u.count))
            suppressed.insert(word);
        }
      }
    }
  }
  std::erase_if(unigrams, [&](const TopicCandidate& u) { return suppressed.contains(u.gram); });

  PreferenceProfile profile;
  profile.author_id = user.author_id;
  for (auto& set : sets)
    for (auto& c : set) profile.topics.push_back(std::move(c));
  std::sort(profile.topics.begin(), profile.topics.end(), ranks_before);
  if (profile.topics.size() > k) profile.topics.resize(k);
  profile.as_vector = profile_vector(profile.topics);
  return profile;
}

}  // namespace portrait
