#include "portrait/config.hpp"

#include <fstream>
#include <stdexcept>

namespace portrait {

using nlohmann::json;

ExperimentAssignment EngineConfig::assignment_for(const std::string& user_id) const {
  auto it = experiments.find(user_id);
  return it == experiments.end() ? ExperimentAssignment{} : it->second;
}

double EngineConfig::lambda_for(const std::string& user_id) const {
  return assignment_for(user_id).mode == "baseline" ? 1.0 : lambda;
}

namespace {

ExperimentAssignment parse_assignment(const json& j) {
  ExperimentAssignment a;
  if (j.is_string() || j.contains("group")) {
    // Study groups: baseline, treatment_1 (baseline UI, gap-aware ranking),
    // treatment_2 (organic UI, gap-aware ranking).
    const auto group = j.is_string() ? j.get<std::string>() : j.at("group").get<std::string>();
    if (group == "baseline") return {"baseline", "baseline"};
    if (group == "treatment_1") return {"treatment", "baseline"};
    if (group == "treatment_2") return {"treatment", "organic"};
    throw std::invalid_argument("unknown experiment group: " + group);
  }
  a.mode = j.value("mode", a.mode);
  a.ui = j.value("ui", a.ui);
  if (a.mode != "baseline" && a.mode != "treatment") throw std::invalid_argument("experiment mode must be baseline or treatment");
  if (a.ui != "organic" && a.ui != "baseline") throw std::invalid_argument("experiment ui must be organic or baseline");
  return a;
}

}  // namespace

EngineConfig config_from_json(const json& j) {
  EngineConfig c;
  c.lambda = j.value("lambda", c.lambda);
  c.top = j.value("top", c.top);
  c.recs_per_post = j.value("recs_per_post", c.recs_per_post);
  c.topics_per_user = j.value("k", c.topics_per_user);
  c.stopword_count = j.value("stopwords", c.stopword_count);
  if (j.contains("alpha")) {
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    if (alpha.size() != 3) throw std::invalid_argument("alpha needs one weight per n-gram order (3)");
    std::copy(alpha.begin(), alpha.end(), c.weights.alpha.begin());
  }
  if (j.contains("tau_days")) c.weights.tau_seconds = j.at("tau_days").get<double>() * kSecondsPerDay;
  c.weights.suppression_ratio = j.value("suppression_ratio", c.weights.suppression_ratio);
  if (j.contains("now") && !j.at("now").is_null()) c.now = j.at("now").get<std::int64_t>();
  if (j.contains("idf_corpus")) c.idf_source = idf_source_from_string(j.at("idf_corpus").get<std::string>());
  if (j.contains("cohort")) {
    const auto& cj = j.at("cohort");
    c.cohort_fence = cj.value("fence", c.cohort_fence);
    c.min_posts = cj.value("min_posts", c.min_posts);
  }
  if (j.contains("canvas")) {
    c.layout.canvas_width = j.at("canvas").value("width", c.layout.canvas_width);
    c.layout.canvas_height = j.at("canvas").value("height", c.layout.canvas_height);
  }
  if (j.contains("palette")) c.layout.palette = j.at("palette").get<std::vector<std::string>>();
  if (j.contains("layout")) {
    const auto& l = j.at("layout");
    c.layout.vogel_c = l.value("vogel_c", c.layout.vogel_c);
    c.layout.circle_radius_factor = l.value("circle_radius_factor", c.layout.circle_radius_factor);
    c.layout.font_min = l.value("font_min", c.layout.font_min);
    c.layout.font_max = l.value("font_max", c.layout.font_max);
    c.layout.char_width = l.value("char_width", c.layout.char_width);
    c.layout.line_height = l.value("line_height", c.layout.line_height);
    c.layout.click_expand = l.value("click_expand", c.layout.click_expand);
    c.layout.seed = l.value("seed", c.layout.seed);
    c.layout.misc_color = l.value("misc_color", c.layout.misc_color);
  }
  if (j.contains("lda")) {
    const auto& l = j.at("lda");
    c.lda.k = l.value("k", c.lda.k);
    c.lda.alpha = l.value("alpha", c.lda.alpha);
    c.lda.beta = l.value("beta", c.lda.beta);
    c.lda.iterations = l.value("iterations", c.lda.iterations);
    c.lda.seed = l.value("seed", c.lda.seed);
    c.contribution_tau = l.value("tau", c.contribution_tau);
    c.report_topics = l.value("report_topics", c.report_topics);
    c.report_keywords = l.value("report_keywords", c.report_keywords);
  }
  if (j.contains("experiments"))
    for (const auto& [user, a] : j.at("experiments").items()) c.experiments[user] = parse_assignment(a);

  if (!(c.lambda >= 0 && c.lambda <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (c.top == 0 || c.recs_per_post == 0) throw std::invalid_argument("recommendation counts must be >= 1");
  if (c.topics_per_user == 0) throw std::invalid_argument("k must be >= 1");
  validate(c.weights);
  validate(c.layout);
  return c;
}

json config_to_json(const EngineConfig& c) {
  json experiments = json::object();
  for (const auto& [user, a] : c.experiments) experiments[user] = {{"mode", a.mode}, {"ui", a.ui}};
  json j{{"lambda", c.lambda},
         {"top", c.top},
         {"recs_per_post", c.recs_per_post},
         {"k", c.topics_per_user},
         {"stopwords", c.stopword_count},
         {"alpha", c.weights.alpha},
         {"tau_days", c.weights.tau_seconds / kSecondsPerDay},
         {"suppression_ratio", c.weights.suppression_ratio},
         {"idf_corpus", to_string(c.idf_source)},
         {"cohort", {{"fence", c.cohort_fence}, {"min_posts", c.min_posts}}},
         {"canvas", {{"width", c.layout.canvas_width}, {"height", c.layout.canvas_height}}},
         {"palette", c.layout.palette},
         {"layout",
          {{"vogel_c", c.layout.vogel_c},
           {"circle_radius_factor", c.layout.circle_radius_factor},
           {"font_min", c.layout.font_min},
           {"font_max", c.layout.font_max},
           {"char_width", c.layout.char_width},
           {"line_height", c.layout.line_height},
           {"click_expand", c.layout.click_expand},
           {"seed", c.layout.seed},
           {"misc_color", c.layout.misc_color}}},
         {"lda",
          {{"k", c.lda.k},
           {"alpha", c.lda.alpha},
           {"beta", c.lda.beta},
           {"iterations", c.lda.iterations},
           {"seed", c.lda.seed},
           {"tau", c.contribution_tau},
           {"report_topics", c.report_topics},
           {"report_keywords", c.report_keywords}}},
         {"experiments", experiments}};
  j["now"] = c.now ? json(*c.now) : json(nullptr);
  return j;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  try {
    return config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid config " + path.string() + ": " + e.what());
  }
}

}  // namespace portrait
