#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "portrait/config.hpp"
#include "portrait/corpus.hpp"
#include "portrait/preferences.hpp"
#include "portrait/recommender.hpp"
#include "portrait/stance.hpp"

namespace portrait {

namespace fs = std::filesystem;

// Error carrying the HTTP status it maps to.
struct ServiceError : std::runtime_error {
  ServiceError(int status, const std::string& message) : std::runtime_error(message), status(status) {}
  int status;
};

// File layout of a store directory.
class StorePaths {
 public:
  explicit StorePaths(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }
  fs::path config() const { return root_ / "engine.json"; }
  fs::path posts() const { return root_ / "corpus" / "posts.jsonl"; }
  fs::path cohort() const { return root_ / "corpus" / "cohort.json"; }
  fs::path stopwords() const { return root_ / "corpus" / "stopwords.json"; }
  fs::path issue() const { return root_ / "stance" / "issue.json"; }
  fs::path stance_idf() const { return root_ / "stance" / "idf.json"; }
  fs::path stance_vectors() const { return root_ / "stance" / "vectors.json"; }
  fs::path stance_profiles() const { return root_ / "stance" / "profiles.json"; }
  fs::path prefs(const std::string& user_id) const;
  fs::path layout(const std::string& user_id) const;
  fs::path topic_model() const { return root_ / "topics" / "model.json"; }
  fs::path topic_graph() const { return root_ / "topics" / "graph.json"; }
  fs::path topic_report() const { return root_ / "topics" / "report.json"; }
  fs::path events() const { return root_ / "events.log"; }
  fs::path manifest() const { return root_ / "pipeline.json"; }

 private:
  fs::path root_;
};

// File-name-safe form of a user id (percent-encodes everything outside [A-Za-z0-9_.-]).
std::string file_key(std::string_view user_id);

// Writes through a temporary sibling and renames over the target.
void write_file_atomic(const fs::path& path, std::string_view content);
void write_json_atomic(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const fs::path& path);

// engine.json inside the store when no explicit path is given, else defaults.
EngineConfig resolve_config(const fs::path& store, const std::optional<fs::path>& explicit_path);

// ENGINE_STORE, when set, wins over the command-line value.
fs::path resolve_store(const std::string& cli_value);

struct StoredCorpus {
  std::vector<UserDocument> users;  // by author_id
  std::vector<std::string> cohort;  // author ids selected for portraits
  std::set<std::string> stopwords;
  std::int64_t newest_timestamp = 0;

  const UserDocument* find(const std::string& author_id) const;
};

StoredCorpus load_corpus(const StorePaths& paths);

struct RecommendQuery {
  std::optional<std::string> post_id;
  std::optional<double> lambda;
  std::optional<std::size_t> top;
};

// Everything the read path needs, loaded once and never mutated.
struct Snapshot {
  EngineConfig config;
  StoredCorpus corpus;
  std::map<std::string, StanceProfile> stances;
  std::map<std::string, PreferenceProfile> prefs;
  std::map<std::string, std::string> layouts;  // user -> serialized layout
  std::map<std::string, std::string> etags;
  IdfTable gram_idf;
  std::vector<Candidate> pool;
};

std::shared_ptr<const Snapshot> load_snapshot(const fs::path& store, const EngineConfig& config);

// Shared by the CLI and the HTTP endpoint. Throws ServiceError: 404 for an
// unknown user or post, 409 when the pipeline has not produced preferences or
// stances for the user, 400 for an invalid lambda or top.
std::vector<Recommendation> recommendations_for(const Snapshot& snapshot, const std::string& user_id,
                                                const RecommendQuery& query);

// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);

}  // namespace portrait
