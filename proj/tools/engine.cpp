// engine: offline pipeline and HTTP service for data portraits.
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "portrait/json_io.hpp"
#include "portrait/pipeline.hpp"
#include "portrait/server.hpp"
#include "portrait/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace portrait;

namespace {

struct Globals {
  std::string store = "store";
  std::string config;
};

EngineConfig config_of(const Globals& g) {
  std::optional<fs::path> explicit_path;
  if (!g.config.empty()) explicit_path = g.config;
  return resolve_config(resolve_store(g.store), explicit_path);
}

IssueConfig load_issue(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open issue config " + path);
  return parse_issue_config(json::parse(in));
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

PortraitServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data portrait engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--store", g.store, "Store directory (ENGINE_STORE overrides)");
  app.add_option("--config", g.config, "Engine config JSON (default: <store>/engine.json)");

  std::vector<std::string> inputs;
  auto* ingest = app.add_subcommand("ingest", "Load NDJSON crawl files into the store");
  ingest->add_option("--input,--inputs,-i", inputs, "Crawl files")->required()->check(CLI::ExistingFile);

  std::string issue_path, idf_corpus;
  auto* stance = app.add_subcommand("stance", "Build stance vectors and per-user stance profiles");
  stance->add_option("--issue", issue_path, "Issue config JSON (defaults to the stored one)");
  stance->add_option("--idf-corpus", idf_corpus, "IDF source")->check(CLI::IsMember({"issue", "full"}));

  std::string user;
  bool all = false;
  std::optional<std::size_t> k;
  auto* prefs = app.add_subcommand("prefs", "Score topical preferences");
  auto* prefs_user = prefs->add_option("--user", user, "User id");
  prefs->add_flag("--all", all, "Every cohort user")->excludes(prefs_user);
  prefs->add_option("--k", k, "Topics per user")->check(CLI::PositiveNumber);

  std::optional<std::string> post;
  std::optional<double> lambda;
  std::optional<std::size_t> top;
  auto* rec = app.add_subcommand("recommend", "Print recommendations for a user as JSON");
  rec->add_option("--user", user, "User id")->required();
  rec->add_option("--post", post, "Restrict to the topics of one of the user's posts");
  rec->add_option("--lambda", lambda, "Relevance weight in [0, 1] (default from config/experiment)");
  rec->add_option("--top", top, "Number of results")->check(CLI::PositiveNumber);

  std::optional<std::uint64_t> seed;
  auto* layout = app.add_subcommand("layout", "Compute portrait layouts");
  auto* layout_user = layout->add_option("--user", user, "User id");
  layout->add_flag("--all", all, "Every cohort user")->excludes(layout_user);
  layout->add_option("--seed", seed, "Label placement seed");

  std::optional<std::size_t> topics_k, iters;
  std::optional<double> tau;
  auto* topics = app.add_subcommand("topics", "LDA topic model, topic graph and intermediary topics");
  topics->add_option("--k", topics_k, "Number of topics")->check(CLI::PositiveNumber);
  topics->add_option("--iters", iters, "Gibbs sweeps")->check(CLI::PositiveNumber);
  topics->add_option("--seed", seed, "Sampler seed");
  topics->add_option("--tau", tau, "Topic contribution threshold")->check(CLI::Range(0.0, 1.0));

  ServerOptions server_options;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve portraits, recommendations and events over HTTP");
  serve->add_option("--port", server_options.port, "Port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", server_options.host, "Bind address");
  serve->add_option("--static", static_dir, "Directory mounted at /ui")->check(CLI::ExistingDirectory);

  auto* run = app.add_subcommand("run", "ingest, stance, prefs and layout in one go");
  run->add_option("--input,--inputs,-i", inputs, "Crawl files")->required()->check(CLI::ExistingFile);
  run->add_option("--issue", issue_path, "Issue config JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path store = resolve_store(g.store);
    EngineConfig config = config_of(g);
    if (!idf_corpus.empty()) config.idf_source = idf_source_from_string(idf_corpus);
    if (k) config.topics_per_user = *k;

    auto do_stance = [&] {
      const StorePaths paths(store);
      IssueConfig issue;
      if (!issue_path.empty()) issue = load_issue(issue_path);
      else if (fs::exists(paths.issue())) issue = parse_issue_config(read_json_file(paths.issue()));
      else throw std::runtime_error("no --issue given and the store holds none");
      auto result = pipeline::run_stance(store, issue, config);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      json stances = json::array();
      for (const auto& v : result.vectors) stances.push_back({{"stance", v.stance_name}, {"posts", v.post_count}});
      return json{{"stances", stances}, {"users", result.profiles.size()}, {"idf_corpus", to_string(config.idf_source)}};
    };

    if (*ingest) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const auto r = pipeline::ingest(paths, store, config);
      print({{"posts", r.posts}, {"users", r.users}, {"cohort", r.cohort}});
    } else if (*stance) {
      print(do_stance());
    } else if (*prefs) {
      if (all) {
        print({{"users", pipeline::run_prefs_all(store, config)}});
      } else {
        if (user.empty()) throw std::invalid_argument("prefs needs --user or --all");
        print(pipeline::run_prefs(store, user, config));
      }
    } else if (*rec) {
      const auto snap = load_snapshot(store, config);
      const RecommendQuery query{post, lambda, top};
      std::cout << json(recommendations_for(*snap, user, query)).dump() << '\n';
    } else if (*layout) {
      if (seed) config.layout.seed = *seed;
      if (all) {
        print({{"users", pipeline::run_layout_all(store, config)}});
      } else {
        if (user.empty()) throw std::invalid_argument("layout needs --user or --all");
        const auto l = pipeline::run_layout(store, user, config);
        print({{"user_id", l.user_id},
               {"circles", l.circles.size()},
               {"labels", l.labels.size()},
               {"dropped_labels", l.dropped_labels.size()}});
      }
    } else if (*topics) {
      if (topics_k) config.lda.k = *topics_k;
      if (iters) config.lda.iterations = *iters;
      if (seed) config.lda.seed = *seed;
      if (tau) config.contribution_tau = *tau;
      const auto r = pipeline::run_topics(store, config);
      print({{"k", r.model.k},
             {"documents", r.model.doc_ids.size()},
             {"edges", r.graph.edges.size()},
             {"kept_edges", r.filtered.edges.size()},
             {"intermediaries", r.report}});
    } else if (*serve) {
      if (!static_dir.empty()) server_options.static_dir = static_dir;
      PortraitServer server(store, config, server_options);
      const int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving " << store.string() << " on http://" << server_options.host << ':' << port << std::endl;
      server.run();
      g_server = nullptr;
    } else if (*run) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const auto r = pipeline::ingest(paths, store, config);
      json out{{"posts", r.posts}, {"users", r.users}, {"cohort", r.cohort}};
      out["stance"] = do_stance();
      out["prefs"] = pipeline::run_prefs_all(store, config).size();
      out["layouts"] = pipeline::run_layout_all(store, config).size();
      print(out);
    }
  } catch (const ServiceError& e) {
    std::cerr << "error (" << e.status << "): " << e.what() << '\n';
    return e.status == 404 ? 3 : e.status == 409 ? 4 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
