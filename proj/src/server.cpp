#include "portrait/server.hpp"

#include <charconv>
#include <chrono>

#include <httplib.h>

#include "portrait/json_io.hpp"

namespace portrait {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}, {"status", status}}.dump(), kJson);
}

std::optional<double> parse_lambda(const httplib::Request& req) {
  if (!req.has_param("lambda")) return std::nullopt;
  const auto raw = req.get_param_value("lambda");
  double v = 0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || end != raw.data() + raw.size()) throw ServiceError(400, "lambda is not a number: " + raw);
  if (!(v >= 0 && v <= 1)) throw ServiceError(400, "lambda must lie in [0, 1]");
  return v;
}

std::optional<std::size_t> parse_top(const httplib::Request& req) {
  if (!req.has_param("top")) return std::nullopt;
  const auto raw = req.get_param_value("top");
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || end != raw.data() + raw.size() || v == 0)
    throw ServiceError(400, "top must be a positive integer: " + raw);
  return v;
}

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

}  // namespace

PortraitServer::PortraitServer(std::filesystem::path store, EngineConfig config, ServerOptions options)
    : store_(std::move(store)),
      config_(std::move(config)),
      options_(std::move(options)),
      events_(StorePaths(store_).events()),
      http_(std::make_unique<httplib::Server>()) {
  reload();
  routes();
}

PortraitServer::~PortraitServer() { stop(); }

void PortraitServer::reload() {
  auto fresh = load_snapshot(store_, config_);
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(fresh);
}

std::shared_ptr<const Snapshot> PortraitServer::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

void PortraitServer::routes() {
  auto& http = *http_;
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-None-Match");
    res.status = 204;
  });
  if (options_.static_dir && !http.set_mount_point("/ui", options_.static_dir->string()))
    throw std::runtime_error("static directory not found: " + options_.static_dir->string());

  http.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
             const auto snap = snapshot();
             res.set_content(json{{"status", "ok"},
                                  {"users", snap->corpus.users.size()},
                                  {"layouts", snap->layouts.size()},
                                  {"events", events_.last_seq()}}
                                 .dump(),
                             kJson);
           }));

  http.Get(R"(/portrait/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string user_id = req.matches[1];
             const auto snap = snapshot();
             if (!snap->corpus.find(user_id)) throw ServiceError(404, "unknown user: " + user_id);
             auto layout = snap->layouts.find(user_id);
             if (layout == snap->layouts.end()) throw ServiceError(409, "no layout computed for user " + user_id);
             const auto& etag = snap->etags.at(user_id);
             res.set_header("ETag", etag);
             res.set_header("Cache-Control", "no-cache");
             res.set_header("X-Experiment-UI", snap->config.assignment_for(user_id).ui);
             if (req.get_header_value("If-None-Match") == etag) {
               res.status = 304;
               return;
             }
             res.set_content(layout->second, kJson);
           }));

  http.Get(R"(/recommendations/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string user_id = req.matches[1];
             RecommendQuery query;
             if (req.has_param("post_id") && !req.get_param_value("post_id").empty())
               query.post_id = req.get_param_value("post_id");
             query.lambda = parse_lambda(req);
             query.top = parse_top(req);
             const auto snap = snapshot();
             res.set_content(json(recommendations_for(*snap, user_id, query)).dump(), kJson);
           }));

  http.Post("/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
              events_.append(parse_event(req.body, unix_now()));
              res.status = 204;
            }));

  http.Post("/reload", guarded([this](const httplib::Request&, httplib::Response& res) {
              reload();
              res.status = 204;
            }));
}

int PortraitServer::bind() {
  if (options_.port == 0) {
    options_.port = http_->bind_to_any_port(options_.host);
    if (options_.port < 0) throw std::runtime_error("cannot bind " + options_.host);
  } else if (!http_->bind_to_port(options_.host, options_.port)) {
    throw std::runtime_error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  return options_.port;
}

bool PortraitServer::run() { return http_->listen_after_bind(); }

void PortraitServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

bool PortraitServer::is_running() const { return http_->is_running(); }

void PortraitServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace portrait
