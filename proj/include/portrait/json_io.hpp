#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "portrait/corpus.hpp"
#include "portrait/layout.hpp"
#include "portrait/preferences.hpp"
#include "portrait/recommender.hpp"
#include "portrait/stance.hpp"
#include "portrait/topicmodel.hpp"
#include "portrait/vecspace.hpp"

// JSON mappings for everything that crosses a file or HTTP boundary.
namespace portrait {

using nlohmann::json;

void to_json(json& j, const Post& p);
void from_json(const json& j, Post& p);

void to_json(json& j, const SparseVector& v);
void from_json(const json& j, SparseVector& v);

void to_json(json& j, const IdfTable& t);
void from_json(const json& j, IdfTable& t);

// {"issue", "stances": [{"name", "keywords": [...]}], "general_keywords": [...]}.
// Keywords are normalized on load; the result is validated.
IssueConfig parse_issue_config(const json& j);
json issue_config_to_json(const IssueConfig& c);

void to_json(json& j, const StanceVector& v);
void from_json(const json& j, StanceVector& v);

void to_json(json& j, const StanceProfile& p);
void from_json(const json& j, StanceProfile& p);

void to_json(json& j, const TopicCandidate& c);
void from_json(const json& j, TopicCandidate& c);

void to_json(json& j, const PreferenceProfile& p);
void from_json(const json& j, PreferenceProfile& p);

void to_json(json& j, const Recommendation& r);

void to_json(json& j, const PortraitLayout& l);
void from_json(const json& j, PortraitLayout& l);

// Structural check of a serialized layout. Returns one message per violation.
std::vector<std::string> validate_layout_json(const json& j);

void to_json(json& j, const LdaModel& m);
void from_json(const json& j, LdaModel& m);

// {"nodes": [...], "edges": [{"source", "target", "weight"}], "centrality": {"id": value}}
void to_json(json& j, const TopicGraph& g);
void from_json(const json& j, TopicGraph& g);

void to_json(json& j, const IntermediaryTopic& t);

}  // namespace portrait
