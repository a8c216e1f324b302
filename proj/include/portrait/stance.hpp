#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "portrait/corpus.hpp"
#include "portrait/vecspace.hpp"

namespace portrait {

struct StanceKeywords {
  std::string name;
  std::set<std::string> keywords;  // normalized
};

// One sensitive issue. The first two stances form the ordered pair used for
// the tendency scalar.
struct IssueConfig {
  std::string issue_name;
  std::vector<StanceKeywords> stances;
  std::set<std::string> general_keywords;
};

// Lowercases, strips accents and trims a keyword so it compares against gram surfaces.
std::string normalize_keyword(std::string_view keyword);

// Throws std::invalid_argument unless there are >= 2 uniquely named stances
// with nonempty, pairwise disjoint keyword sets.
void validate(const IssueConfig& config);

bool post_matches(const Post& post, const std::set<std::string>& keywords);

enum class IdfSource {
  issue_pool,   // non-retweet posts matching any stance or general keyword
  full_corpus,  // every non-retweet post
};

IdfSource idf_source_from_string(std::string_view s);
std::string_view to_string(IdfSource source);

// Document frequencies over the chosen post pool, one document per post.
IdfTable stance_idf(std::span<const UserDocument> corpus, const IssueConfig& config, IdfSource source);

struct StanceVector {
  std::string stance_name;
  SparseVector vector;
  std::size_t post_count = 0;  // pooled posts; 0 means the vector is zero
};

// Pools the non-retweet posts that contain at least one keyword of each stance
// and TF-IDF weights the pooled term counts.
std::vector<StanceVector> build_stance_vectors(std::span<const UserDocument> corpus, const IssueConfig& config,
                                               const IdfTable& idf);

struct StanceProfile {
  std::string author_id;
  std::vector<std::pair<std::string, double>> similarities;  // in stance order
  double tendency = 0;

  double similarity(const std::string& stance) const;
};

// TF-IDF vector of the user's own (non-retweet) posts against each stance vector.
StanceProfile user_stance(const UserDocument& user, std::span<const StanceVector> stance_vectors, const IdfTable& idf);

// Euclidean distance between similarity vectors. Throws std::invalid_argument
// when the stance sets differ.
double view_gap(const StanceProfile& a, const StanceProfile& b);

}  // namespace portrait
