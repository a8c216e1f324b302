#include "portrait/stance.hpp"

#include <cmath>
#include <stdexcept>

namespace portrait {

std::string normalize_keyword(std::string_view keyword) {
  std::string out;
  for (const auto& tok : tokenize(keyword)) {
    if (!out.empty()) out.push_back(' ');
    out += tok.surface;
  }
  return out;
}

void validate(const IssueConfig& config) {
  if (config.stances.size() < 2) throw std::invalid_argument("an issue needs at least two stances");
  std::set<std::string> names;
  std::set<std::string> all_keywords;
  for (const auto& s : config.stances) {
    if (s.name.empty()) throw std::invalid_argument("stance name is empty");
    if (!names.insert(s.name).second) throw std::invalid_argument("duplicate stance name: " + s.name);
    if (s.keywords.empty()) throw std::invalid_argument("stance " + s.name + " has no keywords");
    for (const auto& k : s.keywords) {
      if (!all_keywords.insert(k).second)
        throw std::invalid_argument("keyword '" + k + "' belongs to more than one stance");
    }
  }
}

bool post_matches(const Post& post, const std::set<std::string>& keywords) {
  if (keywords.empty()) return false;
  for (const auto& g : gram_set(tokenize(post.text)))
    if (keywords.contains(g)) return true;
  return false;
}

IdfSource idf_source_from_string(std::string_view s) {
  if (s == "issue") return IdfSource::issue_pool;
  if (s == "full") return IdfSource::full_corpus;
  throw std::invalid_argument("unknown idf corpus '" + std::string(s) + "' (expected issue or full)");
}

std::string_view to_string(IdfSource source) {
  return source == IdfSource::issue_pool ? "issue" : "full";
}

IdfTable stance_idf(std::span<const UserDocument> corpus, const IssueConfig& config, IdfSource source) {
  std::set<std::string> issue_keywords = config.general_keywords;
  for (const auto& s : config.stances) issue_keywords.insert(s.keywords.begin(), s.keywords.end());

  std::vector<std::set<std::string>> docs;
  for (const auto& user : corpus) {
    for (const auto& post : user.posts) {
      if (post.is_retweet) continue;
      if (source == IdfSource::issue_pool && !post_matches(post, issue_keywords)) continue;
      std::set<std::string> terms;
      for (const auto& [term, count] : term_counts(tokenize(post.text))) terms.insert(term);
      docs.push_back(std::move(terms));
    }
  }
  return IdfTable::from_documents(docs);
}

std::vector<StanceVector> build_stance_vectors(std::span<const UserDocument> corpus, const IssueConfig& config,
                                               const IdfTable& idf) {
  validate(config);
  std::vector<StanceVector> out;
  for (const auto& stance : config.stances) {
    TermCounts pooled;
    std::size_t matched = 0;
    for (const auto& user : corpus) {
      for (const auto& post : user.posts) {
        if (post.is_retweet || !post_matches(post, stance.keywords)) continue;
        accumulate(pooled, term_counts(tokenize(post.text)));
        ++matched;
      }
    }
    out.push_back({stance.name, tfidf_vector(pooled, idf), matched});
  }
  return out;
}

double StanceProfile::similarity(const std::string& stance) const {
  for (const auto& [name, value] : similarities)
    if (name == stance) return value;
  throw std::out_of_range("unknown stance: " + stance);
}

StanceProfile user_stance(const UserDocument& user, std::span<const StanceVector> stance_vectors,
                          const IdfTable& idf) {
  if (stance_vectors.empty()) throw std::invalid_argument("user_stance needs at least one stance vector");
  TermCounts own;
  for (const auto& post : user.posts)
    if (!post.is_retweet) accumulate(own, term_counts(tokenize(post.text)));
  const SparseVector user_vector = tfidf_vector(own, idf);

  StanceProfile profile;
  profile.author_id = user.author_id;
  for (const auto& sv : stance_vectors) profile.similarities.emplace_back(sv.stance_name, cosine(user_vector, sv.vector));
  if (profile.similarities.size() >= 2)
    profile.tendency = profile.similarities[0].second - profile.similarities[1].second;
  return profile;
}

double view_gap(const StanceProfile& a, const StanceProfile& b) {
  if (a.similarities.size() != b.similarities.size())
    throw std::invalid_argument("view_gap: profiles have different stance sets");
  double sq = 0;
  for (std::size_t i = 0; i < a.similarities.size(); ++i) {
    if (a.similarities[i].first != b.similarities[i].first)
      throw std::invalid_argument("view_gap: profiles have different stance sets");
    const double d = a.similarities[i].second - b.similarities[i].second;
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace portrait
