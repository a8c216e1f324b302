#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "portrait/config.hpp"
#include "portrait/events.hpp"
#include "portrait/store.hpp"

namespace httplib {
class Server;
}

namespace portrait {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

// HTTP front of a store. Reads go to an immutable snapshot; reload() builds a
// fresh one from disk and swaps it in. Events are appended to the store's log.
class PortraitServer {
 public:
  PortraitServer(std::filesystem::path store, EngineConfig config, ServerOptions options = {});
  ~PortraitServer();
  PortraitServer(const PortraitServer&) = delete;
  PortraitServer& operator=(const PortraitServer&) = delete;

  void reload();
  std::shared_ptr<const Snapshot> snapshot() const;

  // Binds and returns the port actually used.
  int bind();
  // Serves until stop(); requires bind().
  bool run();
  void stop();
  bool is_running() const;
  void wait_until_ready() const;

  EventLog& events() { return events_; }

 private:
  void routes();

  std::filesystem::path store_;
  EngineConfig config_;
  ServerOptions options_;
  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const Snapshot> snapshot_;
  EventLog events_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace portrait
