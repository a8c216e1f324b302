#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "portrait/layout.hpp"
#include "portrait/preferences.hpp"
#include "portrait/recommender.hpp"
#include "portrait/stance.hpp"
#include "portrait/topicmodel.hpp"

namespace portrait {

// Experiment condition of one user. mode "baseline" ranks by preferences only
// (lambda = 1); "treatment" blends in the view gap. ui is "organic" or "baseline".
struct ExperimentAssignment {
  std::string mode = "treatment";
  std::string ui = "organic";
};

struct EngineConfig {
  double lambda = 0.75;
  std::size_t top = 20;
  std::size_t recs_per_post = 3;
  std::size_t topics_per_user = 30;
  std::size_t stopword_count = 50;
  PreferenceWeights weights;
  std::optional<std::int64_t> now;  // scoring clock; defaults to the newest post in the corpus
  IdfSource idf_source = IdfSource::issue_pool;
  bool cohort_fence = false;
  std::int64_t min_posts = 1;
  LayoutParams layout;
  LdaParams lda;
  double contribution_tau = 0.05;
  std::size_t report_topics = 5;
  std::size_t report_keywords = 6;
  std::map<std::string, ExperimentAssignment> experiments;

  ExperimentAssignment assignment_for(const std::string& user_id) const;
  double lambda_for(const std::string& user_id) const;
};

// Missing keys keep their defaults. Throws std::invalid_argument on bad values.
EngineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const EngineConfig& c);
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace portrait
