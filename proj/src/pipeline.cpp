#include "portrait/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "portrait/json_io.hpp"
#include "portrait/store.hpp"

namespace portrait::pipeline {

using nlohmann::json;

namespace {

void mark_stage(const StorePaths& paths, const std::string& stage, json details) {
  json manifest = fs::exists(paths.manifest()) ? read_json_file(paths.manifest()) : json::object();
  manifest["stages"][stage] = std::move(details);
  write_json_atomic(paths.manifest(), manifest);
}

json limit_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::int64_t scoring_clock(const StoredCorpus& corpus, const EngineConfig& config) {
  return config.now.value_or(corpus.newest_timestamp);
}

const UserDocument& require_user(const StoredCorpus& corpus, const std::string& user_id) {
  const UserDocument* user = corpus.find(user_id);
  if (!user) throw ServiceError(404, "unknown user: " + user_id);
  return *user;
}

PreferenceProfile prefs_for(const StoredCorpus& corpus, const UserDocument& user, const EngineConfig& config) {
  return build_preferences(user, config.topics_per_user, config.weights, corpus.stopwords,
                           scoring_clock(corpus, config));
}

}  // namespace

IngestResult ingest(std::span<const fs::path> inputs, const fs::path& store, const EngineConfig& config) {
  std::vector<CrawlRecord> records;
  for (const auto& input : inputs) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open " + input.string());
    auto part = read_crawl(in, input.string());
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const auto users = build_user_documents(records);

  IngestResult result;
  result.users = users.size();
  if (config.cohort_fence) {
    result.filter = fence_filter(users, config.min_posts);
  } else {
    result.filter.max_followers = std::numeric_limits<double>::infinity();
    result.filter.max_friends = std::numeric_limits<double>::infinity();
    result.filter.min_posts = config.min_posts;
  }
  const auto cohort = select_cohort(users, result.filter);
  result.cohort = cohort.size();

  std::ostringstream posts;
  for (const auto& u : users) {
    for (const auto& p : u.posts) {
      json line = p;
      line["follower_count"] = u.follower_count;
      line["friend_count"] = u.friend_count;
      posts << line.dump() << '\n';
      ++result.posts;
    }
  }
  const StorePaths paths(store);
  write_file_atomic(paths.posts(), posts.str());

  std::vector<std::string> cohort_ids;
  for (const auto& u : cohort) cohort_ids.push_back(u.author_id);
  write_json_atomic(paths.cohort(), json{{"filter",
                                          {{"max_followers", limit_to_json(result.filter.max_followers)},
                                           {"max_friends", limit_to_json(result.filter.max_friends)},
                                           {"min_posts", result.filter.min_posts}}},
                                         {"users", cohort_ids}});
  write_json_atomic(paths.stopwords(), top_stopwords(users, config.stopword_count));
  mark_stage(paths, "ingest", {{"posts", result.posts}, {"users", result.users}, {"cohort", result.cohort}});
  return result;
}

StanceResult run_stance(const fs::path& store, const IssueConfig& issue, const EngineConfig& config) {
  const StorePaths paths(store);
  const auto corpus = load_corpus(paths);
  StanceResult result;
  result.idf = stance_idf(corpus.users, issue, config.idf_source);
  result.vectors = build_stance_vectors(corpus.users, issue, result.idf);
  for (const auto& v : result.vectors)
    if (v.post_count == 0) result.warnings.push_back("stance '" + v.stance_name + "' matched no posts; its vector is zero");
  for (const auto& user : corpus.users) result.profiles.push_back(user_stance(user, result.vectors, result.idf));

  write_json_atomic(paths.issue(), issue_config_to_json(issue));
  write_json_atomic(paths.stance_idf(), result.idf);
  write_json_atomic(paths.stance_vectors(), result.vectors);
  write_json_atomic(paths.stance_profiles(), result.profiles);
  mark_stage(paths, "stance", {{"users", result.profiles.size()}, {"idf_corpus", to_string(config.idf_source)}});
  return result;
}

PreferenceProfile run_prefs(const fs::path& store, const std::string& user_id, const EngineConfig& config) {
  const StorePaths paths(store);
  const auto corpus = load_corpus(paths);
  auto profile = prefs_for(corpus, require_user(corpus, user_id), config);
  write_json_atomic(paths.prefs(user_id), profile);
  return profile;
}

std::vector<std::string> run_prefs_all(const fs::path& store, const EngineConfig& config) {
  const StorePaths paths(store);
  const auto corpus = load_corpus(paths);
  for (const auto& id : corpus.cohort) write_json_atomic(paths.prefs(id), prefs_for(corpus, require_user(corpus, id), config));
  mark_stage(paths, "prefs", {{"users", corpus.cohort.size()}});
  return corpus.cohort;
}

namespace {

PortraitLayout layout_for(const StorePaths& paths, const StoredCorpus& corpus, const std::string& user_id,
                          const EngineConfig& config) {
  const auto& user = require_user(corpus, user_id);
  if (!fs::exists(paths.prefs(user_id))) throw ServiceError(409, "no preferences computed for user " + user_id);
  const auto profile = read_json_file(paths.prefs(user_id)).get<PreferenceProfile>();
  auto layout = build_layout(user_id, profile, user.posts, config.layout);
  write_file_atomic(paths.layout(user_id), json(layout).dump());
  return layout;
}

}  // namespace

PortraitLayout run_layout(const fs::path& store, const std::string& user_id, const EngineConfig& config) {
  const StorePaths paths(store);
  return layout_for(paths, load_corpus(paths), user_id, config);
}

std::vector<std::string> run_layout_all(const fs::path& store, const EngineConfig& config) {
  const StorePaths paths(store);
  const auto corpus = load_corpus(paths);
  for (const auto& id : corpus.cohort) layout_for(paths, corpus, id, config);
  mark_stage(paths, "layout", {{"users", corpus.cohort.size()}});
  return corpus.cohort;
}

TopicsResult run_topics(const fs::path& store, const EngineConfig& config) {
  const StorePaths paths(store);
  const auto corpus = load_corpus(paths);
  std::vector<UserDocument> cohort;
  for (const auto& id : corpus.cohort) cohort.push_back(require_user(corpus, id));

  TopicsResult result;
  result.model = lda_train(build_lda_corpus(cohort, corpus.stopwords), config.lda);
  result.graph = build_topic_graph(result.model.theta, result.model.k, config.contribution_tau);
  if (!result.graph.edges.empty()) {
    result.filtered = upper_decile_filter(result.graph);
    result.filtered.centrality = betweenness(result.filtered);
  }
  result.report = intermediary_topics(result.model, result.filtered, config.report_topics, config.report_keywords);

  write_file_atomic(paths.topic_model(), json(result.model).dump());
  write_json_atomic(paths.topic_graph(), result.filtered);
  write_json_atomic(paths.topic_report(), result.report);
  mark_stage(paths, "topics", {{"k", result.model.k},
                               {"edges", result.graph.edges.size()},
                               {"kept_edges", result.filtered.edges.size()},
                               {"kept_nodes", result.filtered.nodes.size()}});
  return result;
}

}  // namespace portrait::pipeline
