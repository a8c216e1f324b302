#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "portrait/config.hpp"
#include "portrait/corpus.hpp"
#include "portrait/layout.hpp"
#include "portrait/preferences.hpp"
#include "portrait/stance.hpp"
#include "portrait/topicmodel.hpp"

// Offline stages. Each reads what earlier stages left in the store and writes
// its own artifacts atomically.
namespace portrait::pipeline {

namespace fs = std::filesystem;

struct IngestResult {
  std::size_t posts = 0;
  std::size_t users = 0;
  std::size_t cohort = 0;
  CohortFilter filter;
};

// Reads NDJSON crawl files, replaces the store corpus and selects the cohort.
IngestResult ingest(std::span<const fs::path> inputs, const fs::path& store, const EngineConfig& config);

struct StanceResult {
  IdfTable idf;
  std::vector<StanceVector> vectors;
  std::vector<StanceProfile> profiles;  // every user in the corpus
  std::vector<std::string> warnings;
};

StanceResult run_stance(const fs::path& store, const IssueConfig& issue, const EngineConfig& config);

PreferenceProfile run_prefs(const fs::path& store, const std::string& user_id, const EngineConfig& config);
// Preferences for every cohort user; returns the processed ids.
std::vector<std::string> run_prefs_all(const fs::path& store, const EngineConfig& config);

PortraitLayout run_layout(const fs::path& store, const std::string& user_id, const EngineConfig& config);
std::vector<std::string> run_layout_all(const fs::path& store, const EngineConfig& config);

struct TopicsResult {
  LdaModel model;
  TopicGraph graph;     // before filtering
  TopicGraph filtered;  // upper decile with centrality
  std::vector<IntermediaryTopic> report;
};

// LDA over the cohort's user documents, topic graph, decile filter and
// betweenness. Writes model, filtered graph and report.
TopicsResult run_topics(const fs::path& store, const EngineConfig& config);

}  // namespace portrait::pipeline
