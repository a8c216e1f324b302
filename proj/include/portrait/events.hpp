#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace portrait {

enum class EventKind {
  topic_click,
  circle_click,
  balloon_open,
  balloon_close,
  recommendation_shown,
  recommendation_clicked,
};

std::string to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view s);

// topic_click carries a gram; every other kind refers to a post.
bool carries_gram(EventKind kind);

struct InteractionEvent {
  std::uint64_t seq = 0;  // 0 until appended
  std::int64_t timestamp = 0;
  std::string user_id;
  EventKind kind = EventKind::topic_click;
  std::string target;  // gram or post_id, depending on kind

  bool operator==(const InteractionEvent&) const = default;
};

nlohmann::json event_to_json(const InteractionEvent& e);

// Parses a request body (no seq). Throws ServiceError 400 when malformed and
// 422 when the payload does not fit the kind. A missing timestamp is filled
// from `now`.
InteractionEvent parse_event(std::string_view body, std::int64_t now);

struct EventCounters {
  std::map<std::string, std::uint64_t> by_kind;
  std::map<std::string, std::uint64_t> by_user;
  std::map<std::string, std::uint64_t> by_target;  // "kind:target"
  std::uint64_t total = 0;
  std::uint64_t last_seq = 0;

  void add(const InteractionEvent& e);
  bool operator==(const EventCounters&) const = default;
};

EventCounters replay(const std::vector<InteractionEvent>& events);

// Append-only NDJSON log. One writer at a time; each append is fsynced before
// it returns. Sequence numbers resume from whatever the file already holds.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  InteractionEvent append(InteractionEvent event);
  std::uint64_t last_seq() const;
  EventCounters counters() const;

  static std::vector<InteractionEvent> read_all(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::uint64_t seq_ = 0;
  EventCounters counters_;
};

}  // namespace portrait
