#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "live_server.hpp"

using namespace portrait;
using nlohmann::json;

#ifndef ENGINE_BIN
#define ENGINE_BIN "engine"
#endif

namespace {

struct Env {
  fixture::TempDir tmp{"server"};
  fs::path store = tmp.path() / "store";
  EngineConfig config = fixture::build_store(store);
};

Env& env() {
  static Env e;
  return e;
}

std::string run_cli(const std::string& args) {
  const auto out = env().tmp.path() / "cli.out";
  const std::string cmd = std::string(ENGINE_BIN) + " --store " + env().store.string() + " " + args + " > " + out.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(out);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

TEST_CASE("portrait endpoint") {
  fixture::LiveServer live(env().store, env().config);
  auto c = live.client();

  auto r = c.Get("/portrait/pc01");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("Content-Type").find("application/json") == 0);
  CHECK(r->get_header_value("X-Experiment-UI") == "baseline");
  const auto body = json::parse(r->body);
  CHECK(validate_layout_json(body).empty());
  CHECK(body.at("user_id") == "pc01");
  const auto etag = r->get_header_value("ETag");
  CHECK_FALSE(etag.empty());

  auto again = c.Get("/portrait/pc01");
  REQUIRE(again);
  CHECK(again->body == r->body);
  CHECK(again->get_header_value("ETag") == etag);

  auto cached = c.Get("/portrait/pc01", {{"If-None-Match", etag}});
  REQUIRE(cached);
  CHECK(cached->status == 304);
  CHECK(cached->body.empty());

  CHECK(c.Get("/portrait/pc02")->get_header_value("X-Experiment-UI") == "organic");
  CHECK(c.Get("/portrait/pl01")->get_header_value("X-Experiment-UI") == "baseline");
  CHECK(c.Get("/portrait/pc02")->get_header_value("ETag") != etag);

  auto missing = c.Get("/portrait/nobody");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body).at("status") == 404);
}

TEST_CASE("portrait endpoint: 409 until the layout exists") {
  fixture::TempDir tmp("server-409");
  const auto store = tmp.path() / "store";
  const auto config = fixture::build_store(store);
  fs::remove(StorePaths(store).layout("pl04"));
  fixture::LiveServer live(store, config);
  auto c = live.client();
  CHECK(c.Get("/portrait/pl04")->status == 409);
  pipeline::run_layout(store, "pl04", config);
  CHECK(c.Get("/portrait/pl04")->status == 409);
  CHECK(c.Post("/reload")->status == 204);
  CHECK(c.Get("/portrait/pl04")->status == 200);
}

TEST_CASE("recommendations endpoint") {
  fixture::LiveServer live(env().store, env().config);
  auto c = live.client();

  auto r = c.Get("/recommendations/pc03?top=3");
  REQUIRE(r);
  CHECK(r->status == 200);
  const auto three = json::parse(r->body);
  REQUIRE(three.is_array());
  CHECK(three.size() <= 3);
  for (const auto& rec : three) {
    for (const char* key : {"post", "relevance", "gap", "combined", "matched_topics"}) CHECK(rec.contains(key));
    for (const char* key : {"id", "author_id", "timestamp", "text"}) CHECK(rec.at("post").contains(key));
    CHECK(rec.at("post").at("author_id") != "pc03");
  }

  // lambda = 1 orders by relevance alone.
  const auto pure = json::parse(c.Get("/recommendations/pc03?lambda=1&top=20")->body);
  for (std::size_t i = 1; i < pure.size(); ++i)
    CHECK(pure[i].at("relevance").get<double>() <= pure[i - 1].at("relevance").get<double>());
  for (const auto& rec : pure) CHECK(rec.at("combined").get<double>() == rec.at("relevance").get<double>());

  CHECK(json::parse(c.Get("/recommendations/pc03")->body).size() == env().config.top);

  CHECK(c.Get("/recommendations/pc03?lambda=2")->status == 400);
  CHECK(c.Get("/recommendations/pc03?lambda=abc")->status == 400);
  CHECK(c.Get("/recommendations/pc03?top=0")->status == 400);
  CHECK(c.Get("/recommendations/pc03?top=-1")->status == 400);
  CHECK(c.Get("/recommendations/nobody")->status == 404);
  CHECK(c.Get("/recommendations/pc03?post_id=missing")->status == 404);

  const auto first = json::parse(c.Get("/recommendations/pc03?lambda=0.5")->body);
  CHECK(json::parse(c.Get("/recommendations/pc03?lambda=0.5")->body) == first);
}

TEST_CASE("HTTP and CLI recommendations are byte-identical") {
  fixture::LiveServer live(env().store, env().config);
  auto c = live.client();
  CHECK(c.Get("/recommendations/pl07")->body == run_cli("recommend --user pl07"));
  CHECK(c.Get("/recommendations/pc01?lambda=0.3&top=4")->body == run_cli("recommend --user pc01 --lambda 0.3 --top 4"));
  CHECK(c.Get("/recommendations/pc05?post_id=pc05-01")->body == run_cli("recommend --user pc05 --post pc05-01"));
}

TEST_CASE("events endpoint") {
  fixture::TempDir tmp("server-events");
  const auto store = tmp.path() / "store";
  const auto config = fixture::build_store(store);
  fixture::LiveServer live(store, config);
  auto c = live.client();
  const auto log = StorePaths(store).events();

  auto ok = c.Post("/events", R"({"user_id": "pc01", "kind": "topic_click", "gram": "futbol"})", "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 204);
  CHECK(EventLog::read_all(log).size() == 1);

  CHECK(c.Post("/events", R"({"user_id": "pc01", "kind": "circle_click", "gram": "futbol"})", "application/json")->status == 422);
  CHECK(c.Post("/events", R"({"user_id": "pc01", "kind": "teleport", "gram": "x"})", "application/json")->status == 400);
  CHECK(c.Post("/events", "{", "application/json")->status == 400);
  CHECK(EventLog::read_all(log).size() == 1);

  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&] {
      auto cc = live.client();
      for (int i = 0; i < 25; ++i)
        CHECK(cc.Post("/events", R"({"user_id": "pl02", "kind": "recommendation_shown", "post_id": "pc03-04"})",
                      "application/json")
                  ->status == 204);
    });
  for (auto& th : threads) th.join();
  const auto all = EventLog::read_all(log);
  REQUIRE(all.size() == 101);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].seq == i + 1);
  CHECK(live.server().events().counters() == replay(all));

  const auto health = json::parse(c.Get("/health")->body);
  CHECK(health.at("events") == 101);
}

TEST_CASE("CORS preflight") {
  fixture::LiveServer live(env().store, env().config);
  auto c = live.client();
  auto r = c.Options("/events");
  REQUIRE(r);
  CHECK(r->status == 204);
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
}
