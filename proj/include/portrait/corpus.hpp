#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace portrait {

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxPostBytes = 560;

struct Post {
  std::string id;
  std::string author_id;
  std::int64_t timestamp = 0;  // epoch seconds
  std::string text;
  bool is_retweet = false;

  bool operator==(const Post&) const = default;
};

// Throws CorpusError when id is empty, timestamp <= 0 or text is too long.
void validate_post(const Post& post);

enum class TokenKind { word, hashtag, mention, url };

std::string_view to_string(TokenKind kind);
TokenKind token_kind_from_string(std::string_view s);

// `surface` is the normalized matching form (lowercase, accents stripped);
// `display` keeps the accents. The surface alone determines the kind: hashtags
// start with '#', mentions with '@', urls with a scheme or "www.".
struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;
  std::string display;

  bool operator==(const Token&) const = default;
};

std::vector<Token> tokenize(std::string_view text);

struct GramCount {
  std::string gram;
  std::int64_t count = 0;

  bool operator==(const GramCount&) const = default;
};

// Counts of n-grams over runs of consecutive word tokens, sorted by count
// descending then gram. For n = 1 hashtags and mentions are counted as well;
// urls never are. Throws std::invalid_argument for n outside 1..3.
std::vector<GramCount> extract_ngrams(std::span<const Token> tokens, int n);

struct GramOccurrence {
  std::string gram;
  std::string display;
  TokenKind kind = TokenKind::word;  // word, hashtag or mention
  int n = 1;
};

// Visits every topic gram of a token stream: hashtags and mentions as single
// grams plus word n-grams for n = 1..max_n, in stream order per n.
void for_each_gram(std::span<const Token> tokens, int max_n,
                   const std::function<void(const GramOccurrence&)>& visit);

// Distinct topic grams contained in a token stream.
std::set<std::string> gram_set(std::span<const Token> tokens, int max_n = 3);

// Gram -> occurrence count within one token stream.
std::map<std::string, std::int64_t> gram_counts(std::span<const Token> tokens, int max_n = 3);

// Surface -> count, urls excluded. This is the term space of the TF-IDF vectors.
using TermCounts = std::map<std::string, std::int64_t>;
TermCounts term_counts(std::span<const Token> tokens);
void accumulate(TermCounts& into, const TermCounts& from);

struct UserDocument {
  std::string author_id;
  std::vector<Post> posts;  // ascending by (timestamp, id)
  TermCounts token_counts;  // over all posts, retweets included
  std::int64_t follower_count = 0;
  std::int64_t friend_count = 0;
};

// One line of an ingest file.
struct CrawlRecord {
  Post post;
  std::int64_t follower_count = 0;
  std::int64_t friend_count = 0;
};

// Parses newline-delimited JSON records. Blank lines are skipped; any invalid
// record throws CorpusError naming the line.
std::vector<CrawlRecord> read_crawl(std::istream& in, std::string_view source_name = "<input>");

// Groups records by author. Post ids must be unique across all records.
// Follower and friend counts come from each author's most recent record.
// Result is sorted by author_id.
std::vector<UserDocument> build_user_documents(std::vector<CrawlRecord> records);

// The k most frequent word terms across the corpus, ties broken by the term.
std::set<std::string> top_stopwords(std::span<const UserDocument> corpus, std::size_t k);

// Linear-interpolation quantile of sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

struct Fence {
  double q1 = 0;
  double q3 = 0;
  double upper = 0;
};

// Boxplot upper fence q3 + 1.5 IQR. Throws std::invalid_argument on empty input.
Fence outlier_fence(std::span<const double> values);

struct CohortFilter {
  double max_followers = 0;
  double max_friends = 0;
  std::int64_t min_posts = 1;
};

void validate(const CohortFilter& filter);

// Filter whose connectivity limits are the boxplot upper fences of the corpus.
CohortFilter fence_filter(std::span<const UserDocument> corpus, std::int64_t min_posts);

// Keeps users within the (inclusive) limits, preserving order.
std::vector<UserDocument> select_cohort(std::span<const UserDocument> corpus, const CohortFilter& filter);

}  // namespace portrait
