#include "portrait/json_io.hpp"

#include <set>

namespace portrait {

void to_json(json& j, const Post& p) {
  j = json{{"id", p.id},
           {"author_id", p.author_id},
           {"timestamp", p.timestamp},
           {"text", p.text},
           {"is_retweet", p.is_retweet}};
}

void from_json(const json& j, Post& p) {
  p.id = j.at("id").get<std::string>();
  p.author_id = j.at("author_id").get<std::string>();
  p.timestamp = j.at("timestamp").get<std::int64_t>();
  p.text = j.at("text").get<std::string>();
  p.is_retweet = j.value("is_retweet", false);
}

void to_json(json& j, const SparseVector& v) {
  j = json::object();
  for (const auto& [term, w] : v.entries()) j[term] = w;
}

void from_json(const json& j, SparseVector& v) {
  std::map<std::string, double> w;
  for (const auto& [term, x] : j.items()) w[term] = x.get<double>();
  v = SparseVector(std::move(w));
}

void to_json(json& j, const IdfTable& t) {
  j = json{{"doc_count", t.doc_count()}, {"doc_freq", t.doc_freq()}};
}

void from_json(const json& j, IdfTable& t) {
  const auto n = j.at("doc_count").get<std::int64_t>();
  if (n == 0) {
    t = IdfTable{};
    return;
  }
  t = IdfTable(n, j.at("doc_freq").get<std::map<std::string, std::int64_t>>());
}

IssueConfig parse_issue_config(const json& j) {
  IssueConfig c;
  c.issue_name = j.value("issue", std::string{});
  for (const auto& s : j.at("stances")) {
    StanceKeywords sk;
    sk.name = s.at("name").get<std::string>();
    for (const auto& k : s.at("keywords")) {
      auto norm = normalize_keyword(k.get<std::string>());
      if (!norm.empty()) sk.keywords.insert(std::move(norm));
    }
    c.stances.push_back(std::move(sk));
  }
  if (j.contains("general_keywords"))
    for (const auto& k : j.at("general_keywords")) {
      auto norm = normalize_keyword(k.get<std::string>());
      if (!norm.empty()) c.general_keywords.insert(std::move(norm));
    }
  validate(c);
  return c;
}

json issue_config_to_json(const IssueConfig& c) {
  json stances = json::array();
  for (const auto& s : c.stances) stances.push_back({{"name", s.name}, {"keywords", s.keywords}});
  return json{{"issue", c.issue_name}, {"stances", stances}, {"general_keywords", c.general_keywords}};
}

void to_json(json& j, const StanceVector& v) {
  j = json{{"stance", v.stance_name}, {"post_count", v.post_count}, {"norm", v.vector.norm()}, {"weights", v.vector}};
}

void from_json(const json& j, StanceVector& v) {
  v.stance_name = j.at("stance").get<std::string>();
  v.post_count = j.value("post_count", std::size_t{0});
  v.vector = j.at("weights").get<SparseVector>();
}

void to_json(json& j, const StanceProfile& p) {
  json sims = json::array();
  for (const auto& [name, value] : p.similarities) sims.push_back({{"stance", name}, {"similarity", value}});
  j = json{{"author_id", p.author_id}, {"similarities", sims}, {"tendency", p.tendency}};
}

void from_json(const json& j, StanceProfile& p) {
  p.author_id = j.at("author_id").get<std::string>();
  p.similarities.clear();
  for (const auto& s : j.at("similarities"))
    p.similarities.emplace_back(s.at("stance").get<std::string>(), s.at("similarity").get<double>());
  p.tendency = j.value("tendency", 0.0);
}

void to_json(json& j, const TopicCandidate& c) {
  j = json{{"gram", c.gram},   {"display", c.display},     {"kind", to_string(c.kind)}, {"n", c.n},
           {"count", c.count}, {"last_used", c.last_used}, {"score", c.score}};
}

void from_json(const json& j, TopicCandidate& c) {
  c.gram = j.at("gram").get<std::string>();
  c.display = j.value("display", c.gram);
  c.kind = token_kind_from_string(j.at("kind").get<std::string>());
  c.n = j.at("n").get<int>();
  c.count = j.at("count").get<std::int64_t>();
  c.last_used = j.at("last_used").get<std::int64_t>();
  c.score = j.at("score").get<double>();
}

void to_json(json& j, const PreferenceProfile& p) {
  j = json{{"author_id", p.author_id}, {"topics", p.topics}};
}

void from_json(const json& j, PreferenceProfile& p) {
  p.author_id = j.at("author_id").get<std::string>();
  p.topics = j.at("topics").get<std::vector<TopicCandidate>>();
  p.as_vector = profile_vector(p.topics);
}

void to_json(json& j, const Recommendation& r) {
  j = json{{"post", r.post},
           {"relevance", r.relevance},
           {"gap", r.gap},
           {"combined", r.combined},
           {"matched_topics", r.matched_topics}};
}

void to_json(json& j, const PortraitLayout& l) {
  json circles = json::array();
  for (const auto& c : l.circles) {
    circles.push_back({{"post_id", c.post_id},
                       {"n", c.n},
                       {"x", c.center.x},
                       {"y", c.center.y},
                       {"r", c.radius},
                       {"color", c.color},
                       {"topic", c.color_topic},
                       {"text", c.text},
                       {"timestamp", c.timestamp}});
  }
  json labels = json::array();
  for (const auto& g : l.labels) {
    labels.push_back({{"gram", g.gram},
                      {"display", g.display},
                      {"kind", to_string(g.kind)},
                      {"score", g.score},
                      {"x", g.position.x},
                      {"y", g.position.y},
                      {"w", g.box.width()},
                      {"h", g.box.height()},
                      {"click_w", g.click_box.width()},
                      {"click_h", g.click_box.height()},
                      {"font_size", g.font_size},
                      {"color", g.color}});
  }
  j = json{{"user_id", l.user_id},
           {"canvas", {{"width", l.width}, {"height", l.height}}},
           {"circles", circles},
           {"labels", labels},
           {"links", l.links},
           {"palette", l.palette},
           {"dropped_labels", l.dropped_labels}};
}

void from_json(const json& j, PortraitLayout& l) {
  l = PortraitLayout{};
  l.user_id = j.value("user_id", std::string{});
  l.width = j.at("canvas").at("width").get<double>();
  l.height = j.at("canvas").at("height").get<double>();
  for (const auto& c : j.at("circles")) {
    CircleGlyph g;
    g.post_id = c.at("post_id").get<std::string>();
    g.n = c.at("n").get<std::int64_t>();
    g.center = {c.at("x").get<double>(), c.at("y").get<double>()};
    g.radius = c.at("r").get<double>();
    g.color = c.at("color").get<std::string>();
    g.color_topic = c.value("topic", std::string{kMiscTopic});
    g.text = c.value("text", std::string{});
    g.timestamp = c.value("timestamp", std::int64_t{0});
    l.circles.push_back(std::move(g));
  }
  for (const auto& x : j.at("labels")) {
    LabelGlyph g;
    g.gram = x.at("gram").get<std::string>();
    g.display = x.value("display", g.gram);
    g.kind = token_kind_from_string(x.at("kind").get<std::string>());
    g.score = x.value("score", 0.0);
    g.position = {x.at("x").get<double>(), x.at("y").get<double>()};
    g.box = Box::centered(g.position, x.at("w").get<double>(), x.at("h").get<double>());
    g.click_box = Box::centered(g.position, x.at("click_w").get<double>(), x.at("click_h").get<double>());
    g.font_size = x.at("font_size").get<double>();
    g.color = x.at("color").get<std::string>();
    l.labels.push_back(std::move(g));
  }
  l.links = j.at("links").get<std::map<std::string, std::vector<std::string>>>();
  l.palette = j.value("palette", std::map<std::string, std::string>{});
  l.dropped_labels = j.value("dropped_labels", std::vector<std::string>{});
}

namespace {

bool is_num(const json& j, const char* key) { return j.contains(key) && j.at(key).is_number(); }
bool is_str(const json& j, const char* key) { return j.contains(key) && j.at(key).is_string(); }

}  // namespace

std::vector<std::string> validate_layout_json(const json& j) {
  std::vector<std::string> errors;
  auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };
  if (!j.is_object()) return {"layout is not an object"};
  if (!j.contains("canvas") || !is_num(j.at("canvas"), "width") || !is_num(j.at("canvas"), "height"))
    fail("canvas must carry numeric width and height");
  for (const char* key : {"circles", "labels"})
    if (!j.contains(key) || !j.at(key).is_array()) fail(std::string(key) + " must be an array");
  if (!j.contains("links") || !j.at("links").is_object()) fail("links must be an object");
  if (!errors.empty()) return errors;

  std::set<std::string> post_ids;
  for (const auto& c : j.at("circles")) {
    if (!is_str(c, "post_id") || !is_num(c, "n") || !is_num(c, "x") || !is_num(c, "y") || !is_num(c, "r") ||
        !is_str(c, "color")) {
      fail("circle entries need post_id, n, x, y, r, color");
      continue;
    }
    if (c.at("n").get<double>() < 1) fail("circle index must be >= 1");
    if (!post_ids.insert(c.at("post_id").get<std::string>()).second) fail("duplicate circle post_id");
  }
  std::set<std::string> grams;
  for (const auto& x : j.at("labels")) {
    bool ok = is_str(x, "gram") && is_str(x, "kind") && is_str(x, "color");
    for (const char* key : {"x", "y", "w", "h", "click_w", "click_h", "font_size"}) ok = ok && is_num(x, key);
    if (!ok) {
      fail("label entries need gram, kind, x, y, w, h, click_w, click_h, font_size, color");
      continue;
    }
    grams.insert(x.at("gram").get<std::string>());
    if (x.at("click_w").get<double>() < x.at("w").get<double>() ||
        x.at("click_h").get<double>() < x.at("h").get<double>())
      fail("click box smaller than label box for " + x.at("gram").get<std::string>());
    if (x.at("font_size").get<double>() <= 0) fail("font_size must be positive");
  }
  for (const auto& [gram, ids] : j.at("links").items()) {
    if (!ids.is_array()) {
      fail("links entry for " + gram + " is not an array");
      continue;
    }
    for (const auto& id : ids)
      if (!id.is_string() || !post_ids.contains(id.get<std::string>()))
        fail("links entry for " + gram + " references an unknown post");
  }
  return errors;
}

void to_json(json& j, const LdaModel& m) {
  j = json{{"k", m.k},         {"alpha", m.alpha}, {"beta", m.beta},   {"iterations", m.iterations},
           {"seed", m.seed},   {"vocab", m.vocab}, {"doc_ids", m.doc_ids}, {"phi", m.phi},
           {"theta", m.theta}};
}

void from_json(const json& j, LdaModel& m) {
  m.k = j.at("k").get<int>();
  m.alpha = j.at("alpha").get<double>();
  m.beta = j.at("beta").get<double>();
  m.iterations = j.value("iterations", 0);
  m.seed = j.value("seed", std::uint64_t{0});
  m.vocab = j.at("vocab").get<std::vector<std::string>>();
  m.doc_ids = j.value("doc_ids", std::vector<std::string>{});
  m.phi = j.at("phi").get<std::vector<std::vector<double>>>();
  m.theta = j.at("theta").get<std::vector<std::vector<double>>>();
}

void to_json(json& j, const TopicGraph& g) {
  json edges = json::array();
  for (const auto& [e, w] : g.edges) edges.push_back({{"source", e.first}, {"target", e.second}, {"weight", w}});
  json centrality = json::object();
  for (const auto& [node, c] : g.centrality) centrality[std::to_string(node)] = c;
  j = json{{"nodes", g.nodes}, {"edges", edges}, {"centrality", centrality}};
}

void from_json(const json& j, TopicGraph& g) {
  g = TopicGraph{};
  g.nodes = j.at("nodes").get<std::vector<int>>();
  for (const auto& e : j.at("edges")) {
    int a = e.at("source").get<int>();
    int b = e.at("target").get<int>();
    if (a > b) std::swap(a, b);
    g.edges[{a, b}] = e.at("weight").get<double>();
  }
  if (j.contains("centrality"))
    for (const auto& [node, c] : j.at("centrality").items()) g.centrality[std::stoi(node)] = c.get<double>();
}

void to_json(json& j, const IntermediaryTopic& t) {
  json keywords = json::array();
  for (const auto& [term, score] : t.keywords) keywords.push_back({{"term", term}, {"score", score}});
  j = json{{"topic", t.topic}, {"centrality", t.centrality}, {"keywords", keywords}};
}

}  // namespace portrait
