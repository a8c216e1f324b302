#include <algorithm>
#include <queue>
#include <stdexcept>

#include "portrait/topicmodel.hpp"

namespace portrait {

TopicGraph build_topic_graph(const std::vector<std::vector<double>>& theta, int k, double tau) {
  if (!(tau > 0 && tau < 1)) throw std::invalid_argument("contribution threshold must lie in (0, 1)");
  TopicGraph g;
  for (int t = 0; t < k; ++t) g.nodes.push_back(t);
  if (theta.empty()) return g;

  std::map<TopicEdge, std::int64_t> inducing;
  for (const auto& row : theta) {
    std::vector<int> contributing;
    for (int t = 0; t < k && t < static_cast<int>(row.size()); ++t)
      if (row[t] >= tau) contributing.push_back(t);
    for (std::size_t a = 0; a < contributing.size(); ++a)
      for (std::size_t b = a + 1; b < contributing.size(); ++b) ++inducing[{contributing[a], contributing[b]}];
  }
  const auto docs = static_cast<double>(theta.size());
  for (const auto& [edge, count] : inducing) g.edges.emplace(edge, static_cast<double>(count) / docs);
  return g;
}

TopicGraph upper_decile_filter(const TopicGraph& graph) {
  if (graph.edges.empty()) throw std::invalid_argument("upper_decile_filter needs at least one edge");
  std::vector<double> weights;
  weights.reserve(graph.edges.size());
  for (const auto& [edge, w] : graph.edges) weights.push_back(w);
  std::sort(weights.begin(), weights.end());
  const double threshold = quantile_sorted(weights, 0.9);

  TopicGraph out;
  std::set<int> kept_nodes;
  for (const auto& [edge, w] : graph.edges) {
    if (w < threshold) continue;
    out.edges.emplace(edge, w);
    kept_nodes.insert(edge.first);
    kept_nodes.insert(edge.second);
  }
  out.nodes.assign(kept_nodes.begin(), kept_nodes.end());
  return out;
}

std::map<int, double> betweenness(const TopicGraph& graph) {
  std::set<int> node_set(graph.nodes.begin(), graph.nodes.end());
  for (const auto& [edge, w] : graph.edges) {
    node_set.insert(edge.first);
    node_set.insert(edge.second);
  }
  const std::vector<int> nodes(node_set.begin(), node_set.end());
  const std::size_t n = nodes.size();
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[nodes[i]] = i;

  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [edge, w] : graph.edges) {
    if (edge.first == edge.second) continue;
    const auto a = index.at(edge.first);
    const auto b = index.at(edge.second);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n);
  std::vector<long> dist(n);
  std::vector<double> delta(n);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    sigma[s] = 1;
    dist[s] = 0;
    std::queue<std::size_t> queue;
    queue.push(s);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop();
      order.push_back(v);
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }

  std::map<int, double> out;
  // Every unordered pair was accumulated from both endpoints.
  for (std::size_t i = 0; i < n; ++i) out[nodes[i]] = cb[i] / 2.0;
  return out;
}

std::vector<IntermediaryTopic> intermediary_topics(const LdaModel& model, const TopicGraph& graph,
                                                   std::size_t topic_count, std::size_t keyword_count) {
  std::vector<std::pair<int, double>> ranked(graph.centrality.begin(), graph.centrality.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<IntermediaryTopic> out;
  for (std::size_t i = 0; i < ranked.size() && i < topic_count; ++i) {
    out.push_back({ranked[i].first, ranked[i].second, top_terms(model, ranked[i].first, keyword_count)});
  }
  return out;
}

}  // namespace portrait
