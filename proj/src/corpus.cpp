#include "portrait/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "portrait/text.hpp"

namespace portrait {

using nlohmann::json;

void validate_post(const Post& post) {
  if (post.id.empty()) throw CorpusError("post id is empty");
  if (post.timestamp <= 0) throw CorpusError("post " + post.id + ": timestamp must be positive");
  if (post.text.size() > kMaxPostBytes)
    throw CorpusError("post " + post.id + ": text exceeds " + std::to_string(kMaxPostBytes) + " bytes");
}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::hashtag: return "hashtag";
    case TokenKind::mention: return "mention";
    case TokenKind::url: return "url";
  }
  return "word";
}

TokenKind token_kind_from_string(std::string_view s) {
  if (s == "word") return TokenKind::word;
  if (s == "hashtag") return TokenKind::hashtag;
  if (s == "mention") return TokenKind::mention;
  if (s == "url") return TokenKind::url;
  throw std::invalid_argument("unknown token kind: " + std::string(s));
}

namespace {

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v' ||
         cp == 0xA0 || cp == 0x2028 || cp == 0x2029 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x3000;
}

bool is_url_edge_punct(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?': case U')': case U'(':
    case U']': case U'[': case U'}': case U'{': case U'"': case U'\'': case 0xAB: case 0xBB:
    case 0xA1: case 0xBF: case 0x2026: case 0x201C: case 0x201D: case 0x2018: case 0x2019:
      return true;
    default:
      return false;
  }
}

std::string encode(std::span<const char32_t> cps) {
  std::string out;
  for (char32_t cp : cps) text::append_utf8(out, cp);
  return out;
}

std::optional<Token> as_url(std::span<const char32_t> chunk) {
  std::size_t b = 0;
  std::size_t e = chunk.size();
  while (b < e && is_url_edge_punct(chunk[b])) ++b;
  while (e > b && is_url_edge_punct(chunk[e - 1])) --e;
  const std::string lowered = text::to_lower_utf8(encode(chunk.subspan(b, e - b)));
  for (std::string_view prefix : {"http://", "https://", "www."}) {
    if (lowered.size() > prefix.size() && lowered.starts_with(prefix))
      return Token{lowered, TokenKind::url, lowered};
  }
  return std::nullopt;
}

void tokenize_chunk(std::span<const char32_t> chunk, std::vector<Token>& out) {
  if (auto url = as_url(chunk)) {
    out.push_back(std::move(*url));
    return;
  }
  std::size_t i = 0;
  while (i < chunk.size()) {
    const char32_t cp = chunk[i];
    TokenKind kind = TokenKind::word;
    std::size_t start = i;
    if ((cp == U'#' || cp == U'@') && i + 1 < chunk.size() && text::is_word_char(chunk[i + 1])) {
      kind = cp == U'#' ? TokenKind::hashtag : TokenKind::mention;
      start = ++i;
    } else if (!text::is_word_char(cp)) {
      ++i;
      continue;
    }
    while (i < chunk.size() && text::is_word_char(chunk[i])) ++i;
    Token tok;
    tok.kind = kind;
    if (kind != TokenKind::word) {
      tok.surface.push_back(static_cast<char>(cp));
      tok.display.push_back(static_cast<char>(cp));
    }
    for (std::size_t k = start; k < i; ++k) {
      const char32_t lower = text::to_lower(chunk[k]);
      text::append_utf8(tok.display, lower);
      text::append_utf8(tok.surface, text::strip_accent(lower));
    }
    out.push_back(std::move(tok));
  }
}

std::string join_surfaces(std::span<const Token> run, std::size_t from, int n, bool display) {
  std::string out;
  for (int k = 0; k < n; ++k) {
    if (k) out.push_back(' ');
    out += display ? run[from + k].display : run[from + k].surface;
  }
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  const auto cps = text::decode_utf8(input);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    const std::size_t start = i;
    while (i < cps.size() && !is_space(cps[i])) ++i;
    if (i > start) tokenize_chunk(std::span(cps).subspan(start, i - start), out);
  }
  return out;
}

void for_each_gram(std::span<const Token> tokens, int max_n,
                   const std::function<void(const GramOccurrence&)>& visit) {
  // Word runs are maximal stretches of word tokens; any other kind ends a run.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].kind != TokenKind::word) {
      if (tokens[i].kind != TokenKind::url)
        visit(GramOccurrence{tokens[i].surface, tokens[i].display, tokens[i].kind, 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < tokens.size() && tokens[i].kind == TokenKind::word) ++i;
    runs.emplace_back(start, i);
  }
  for (int n = 1; n <= max_n; ++n) {
    for (auto [b, e] : runs) {
      for (std::size_t s = b; s + n <= e; ++s) {
        visit(GramOccurrence{join_surfaces(tokens, s, n, false), join_surfaces(tokens, s, n, true),
                             TokenKind::word, n});
      }
    }
  }
}

std::vector<GramCount> extract_ngrams(std::span<const Token> tokens, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("n-gram order must be in 1..3, got " + std::to_string(n));
  std::map<std::string, std::int64_t> counts;
  for_each_gram(tokens, n, [&](const GramOccurrence& g) {
    if (g.n == n) ++counts[g.gram];
  });
  std::vector<GramCount> out;
  out.reserve(counts.size());
  for (auto& [gram, count] : counts) out.push_back({gram, count});
  std::stable_sort(out.begin(), out.end(),
                   [](const GramCount& a, const GramCount& b) { return a.count > b.count; });
  return out;
}

std::set<std::string> gram_set(std::span<const Token> tokens, int max_n) {
  std::set<std::string> out;
  for_each_gram(tokens, max_n, [&](const GramOccurrence& g) { out.insert(g.gram); });
  return out;
}

std::map<std::string, std::int64_t> gram_counts(std::span<const Token> tokens, int max_n) {
  std::map<std::string, std::int64_t> out;
  for_each_gram(tokens, max_n, [&](const GramOccurrence& g) { ++out[g.gram]; });
  return out;
}

TermCounts term_counts(std::span<const Token> tokens) {
  TermCounts out;
  for (const auto& t : tokens)
    if (t.kind != TokenKind::url) ++out[t.surface];
  return out;
}

void accumulate(TermCounts& into, const TermCounts& from) {
  for (const auto& [term, count] : from) into[term] += count;
}

std::vector<CrawlRecord> read_crawl(std::istream& in, std::string_view source_name) {
  std::vector<CrawlRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = [&] { return std::string(source_name) + ":" + std::to_string(line_no) + ": "; };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorpusError(where() + "malformed JSON: " + e.what());
    }
    try {
      CrawlRecord rec;
      rec.post.id = j.at("id").is_number() ? j.at("id").dump() : j.at("id").get<std::string>();
      rec.post.author_id =
          j.at("author_id").is_number() ? j.at("author_id").dump() : j.at("author_id").get<std::string>();
      rec.post.timestamp = j.at("timestamp").get<std::int64_t>();
      rec.post.text = j.at("text").get<std::string>();
      rec.post.is_retweet = j.value("is_retweet", false);
      rec.follower_count = j.value("follower_count", std::int64_t{0});
      rec.friend_count = j.value("friend_count", std::int64_t{0});
      if (rec.follower_count < 0 || rec.friend_count < 0) throw CorpusError("negative connectivity count");
      validate_post(rec.post);
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw CorpusError(where() + "invalid record: " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError(where() + e.what());
    }
  }
  return out;
}

std::vector<UserDocument> build_user_documents(std::vector<CrawlRecord> records) {
  std::unordered_set<std::string> seen;
  std::map<std::string, UserDocument> by_author;
  std::map<std::string, std::int64_t> latest;
  for (auto& rec : records) {
    validate_post(rec.post);
    if (!seen.insert(rec.post.id).second) throw CorpusError("duplicate post id: " + rec.post.id);
    auto& doc = by_author[rec.post.author_id];
    doc.author_id = rec.post.author_id;
    auto [it, fresh] = latest.try_emplace(doc.author_id, rec.post.timestamp);
    if (fresh || rec.post.timestamp >= it->second) {
      it->second = rec.post.timestamp;
      doc.follower_count = rec.follower_count;
      doc.friend_count = rec.friend_count;
    }
    doc.posts.push_back(std::move(rec.post));
  }
  std::vector<UserDocument> out;
  out.reserve(by_author.size());
  for (auto& [author, doc] : by_author) {
    std::sort(doc.posts.begin(), doc.posts.end(), [](const Post& a, const Post& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
    });
    for (const auto& p : doc.posts) accumulate(doc.token_counts, term_counts(tokenize(p.text)));
    out.push_back(std::move(doc));
  }
  return out;
}

std::set<std::string> top_stopwords(std::span<const UserDocument> corpus, std::size_t k) {
  std::map<std::string, std::int64_t> freq;
  for (const auto& doc : corpus)
    for (const auto& [term, count] : doc.token_counts)
      if (!term.empty() && term[0] != '#' && term[0] != '@') freq[term] += count;
  std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.insert(ranked[i].first);
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  if (p <= 0) return sorted.front();
  if (p >= 1) return sorted.back();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Fence outlier_fence(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("outlier_fence needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Fence f;
  f.q1 = quantile_sorted(sorted, 0.25);
  f.q3 = quantile_sorted(sorted, 0.75);
  f.upper = f.q3 + 1.5 * (f.q3 - f.q1);
  return f;
}

void validate(const CohortFilter& filter) {
  if (filter.min_posts < 1) throw std::invalid_argument("min_posts must be >= 1");
  if (filter.max_followers < 0 || filter.max_friends < 0)
    throw std::invalid_argument("connectivity limits must be nonnegative");
}

CohortFilter fence_filter(std::span<const UserDocument> corpus, std::int64_t min_posts) {
  CohortFilter f;
  f.min_posts = min_posts;
  if (corpus.empty()) return f;
  std::vector<double> followers;
  std::vector<double> friends;
  for (const auto& d : corpus) {
    followers.push_back(static_cast<double>(d.follower_count));
    friends.push_back(static_cast<double>(d.friend_count));
  }
  f.max_followers = outlier_fence(followers).upper;
  f.max_friends = outlier_fence(friends).upper;
  return f;
}

std::vector<UserDocument> select_cohort(std::span<const UserDocument> corpus, const CohortFilter& filter) {
  validate(filter);
  std::vector<UserDocument> out;
  for (const auto& d : corpus) {
    if (static_cast<double>(d.follower_count) <= filter.max_followers &&
        static_cast<double>(d.friend_count) <= filter.max_friends &&
        static_cast<std::int64_t>(d.posts.size()) >= filter.min_posts)
      out.push_back(d);
  }
  return out;
}

}  // namespace portrait
