#include "portrait/store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "portrait/json_io.hpp"

namespace portrait {

using nlohmann::json;

std::string file_key(std::string_view user_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : user_id) {
    if (std::isalnum(c) || c == '_' || c == '-' || (c == '.' && !out.empty())) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

fs::path StorePaths::prefs(const std::string& user_id) const { return root_ / "prefs" / (file_key(user_id) + ".json"); }

fs::path StorePaths::layout(const std::string& user_id) const {
  return root_ / "layouts" / (file_key(user_id) + ".json");
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json_atomic(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

EngineConfig resolve_config(const fs::path& store, const std::optional<fs::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  const StorePaths paths(store);
  if (fs::exists(paths.config())) return load_config(paths.config());
  return EngineConfig{};
}

fs::path resolve_store(const std::string& cli_value) {
  if (const char* env = std::getenv("ENGINE_STORE"); env && *env) return env;
  return cli_value;
}

const UserDocument* StoredCorpus::find(const std::string& author_id) const {
  auto it = std::lower_bound(users.begin(), users.end(), author_id,
                             [](const UserDocument& u, const std::string& id) { return u.author_id < id; });
  return it != users.end() && it->author_id == author_id ? &*it : nullptr;
}

StoredCorpus load_corpus(const StorePaths& paths) {
  std::ifstream in(paths.posts());
  if (!in) throw ServiceError(409, "store has no ingested corpus: " + paths.posts().string());
  StoredCorpus out;
  out.users = build_user_documents(read_crawl(in, paths.posts().string()));
  for (const auto& u : out.users)
    for (const auto& p : u.posts) out.newest_timestamp = std::max(out.newest_timestamp, p.timestamp);
  if (fs::exists(paths.cohort())) {
    out.cohort = read_json_file(paths.cohort()).at("users").get<std::vector<std::string>>();
  } else {
    for (const auto& u : out.users) out.cohort.push_back(u.author_id);
  }
  if (fs::exists(paths.stopwords()))
    out.stopwords = read_json_file(paths.stopwords()).get<std::set<std::string>>();
  return out;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::shared_ptr<const Snapshot> load_snapshot(const fs::path& store, const EngineConfig& config) {
  const StorePaths paths(store);
  auto snap = std::make_shared<Snapshot>();
  snap->config = config;
  snap->corpus = load_corpus(paths);

  if (fs::exists(paths.stance_profiles()))
    for (auto& p : read_json_file(paths.stance_profiles()).get<std::vector<StanceProfile>>())
      snap->stances.emplace(p.author_id, std::move(p));

  for (const auto& user : snap->corpus.users) {
    if (const auto path = paths.prefs(user.author_id); fs::exists(path))
      snap->prefs.emplace(user.author_id, read_json_file(path).get<PreferenceProfile>());
    if (const auto path = paths.layout(user.author_id); fs::exists(path)) {
      auto text = read_json_file(path).dump();
      snap->etags.emplace(user.author_id, "\"" + content_hash(text) + "\"");
      snap->layouts.emplace(user.author_id, std::move(text));
    }
  }

  snap->gram_idf = gram_idf(snap->corpus.users);
  for (const auto& user : snap->corpus.users) {
    auto it = snap->stances.find(user.author_id);
    if (it == snap->stances.end()) continue;
    for (const auto& post : user.posts)
      if (!post.is_retweet) snap->pool.push_back({post, it->second});
  }
  return snap;
}

std::vector<Recommendation> recommendations_for(const Snapshot& snapshot, const std::string& user_id,
                                                const RecommendQuery& query) {
  const UserDocument* user = snapshot.corpus.find(user_id);
  if (!user) throw ServiceError(404, "unknown user: " + user_id);

  const double lambda = query.lambda.value_or(snapshot.config.lambda_for(user_id));
  if (!(lambda >= 0 && lambda <= 1)) throw ServiceError(400, "lambda must lie in [0, 1]");
  const std::size_t top = query.top.value_or(query.post_id ? snapshot.config.recs_per_post : snapshot.config.top);
  if (top == 0) throw ServiceError(400, "top must be >= 1");

  auto prefs = snapshot.prefs.find(user_id);
  auto stance = snapshot.stances.find(user_id);
  if (prefs == snapshot.prefs.end() || stance == snapshot.stances.end())
    throw ServiceError(409, "pipeline incomplete for user " + user_id);

  const RecommendOptions options{lambda, top};
  if (!query.post_id) return recommend(prefs->second, stance->second, snapshot.pool, snapshot.gram_idf, options);

  auto post = std::find_if(user->posts.begin(), user->posts.end(),
                           [&](const Post& p) { return p.id == *query.post_id; });
  if (post == user->posts.end()) throw ServiceError(404, "unknown post " + *query.post_id + " for user " + user_id);
  const auto topics = matched_topics(prefs->second, *post);
  if (topics.empty()) return {};
  const auto restricted = restrict_to_grams(snapshot.pool, std::set<std::string>(topics.begin(), topics.end()));
  return recommend(prefs->second, stance->second, restricted, snapshot.gram_idf, options);
}

}  // namespace portrait
