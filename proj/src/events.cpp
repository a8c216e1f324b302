#include "portrait/events.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

#include "portrait/store.hpp"

namespace portrait {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kKinds{{
    {EventKind::topic_click, "topic_click"},
    {EventKind::circle_click, "circle_click"},
    {EventKind::balloon_open, "balloon_open"},
    {EventKind::balloon_close, "balloon_close"},
    {EventKind::recommendation_shown, "recommendation_shown"},
    {EventKind::recommendation_clicked, "recommendation_clicked"},
}};

std::string nonempty_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string() || v.get_ref<const std::string&>().empty())
    throw ServiceError(400, std::string(key) + " must be a non-empty string");
  return v.get<std::string>();
}

}  // namespace

std::string to_string(EventKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return std::string(name);
  return "unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (const auto& [k, name] : kKinds)
    if (name == s) return k;
  return std::nullopt;
}

bool carries_gram(EventKind kind) { return kind == EventKind::topic_click; }

json event_to_json(const InteractionEvent& e) {
  json j{{"seq", e.seq}, {"timestamp", e.timestamp}, {"user_id", e.user_id}, {"kind", to_string(e.kind)}};
  j[carries_gram(e.kind) ? "gram" : "post_id"] = e.target;
  return j;
}

InteractionEvent parse_event(std::string_view body, std::int64_t now) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ServiceError(400, "event body must be a JSON object");
  if (j.contains("seq")) throw ServiceError(400, "seq is assigned by the server");
  if (!j.contains("user_id") || !j.contains("kind")) throw ServiceError(400, "event needs user_id and kind");

  InteractionEvent e;
  e.user_id = nonempty_string(j, "user_id");
  if (!j.at("kind").is_string()) throw ServiceError(400, "kind must be a string");
  const auto kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw ServiceError(400, "unknown event kind: " + j.at("kind").get<std::string>());
  e.kind = *kind;

  e.timestamp = now;
  if (j.contains("timestamp")) {
    if (!j.at("timestamp").is_number_integer()) throw ServiceError(400, "timestamp must be an integer");
    e.timestamp = j.at("timestamp").get<std::int64_t>();
  }

  const bool has_gram = j.contains("gram");
  const bool has_post = j.contains("post_id");
  if (!has_gram && !has_post) throw ServiceError(400, "event needs a gram or post_id payload");
  if (has_gram && has_post) throw ServiceError(422, "event carries both gram and post_id");
  if (carries_gram(e.kind) != has_gram)
    throw ServiceError(422, to_string(e.kind) + (has_gram ? " carries post_id, not gram" : " carries gram, not post_id"));
  e.target = nonempty_string(j, has_gram ? "gram" : "post_id");
  return e;
}

void EventCounters::add(const InteractionEvent& e) {
  const auto kind = to_string(e.kind);
  ++by_kind[kind];
  ++by_user[e.user_id];
  ++by_target[kind + ":" + e.target];
  ++total;
  last_seq = e.seq;
}

EventCounters replay(const std::vector<InteractionEvent>& events) {
  EventCounters c;
  for (const auto& e : events) c.add(e);
  return c;
}

std::vector<InteractionEvent> EventLog::read_all(const std::filesystem::path& path) {
  std::vector<InteractionEvent> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad event line");
    InteractionEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp = j.at("timestamp").get<std::int64_t>();
    e.user_id = j.at("user_id").get<std::string>();
    const auto kind = event_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": unknown kind");
    e.kind = *kind;
    e.target = j.at(carries_gram(e.kind) ? "gram" : "post_id").get<std::string>();
    if (!out.empty() && e.seq <= out.back().seq)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": seq not increasing");
    out.push_back(std::move(e));
  }
  return out;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  const auto existing = read_all(path_);
  counters_ = replay(existing);
  seq_ = counters_.last_seq;
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "open " + path_.string());
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

InteractionEvent EventLog::append(InteractionEvent event) {
  std::lock_guard lock(mu_);
  event.seq = seq_ + 1;
  const std::string line = event_to_json(event).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "append to " + path_.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw std::system_error(errno, std::generic_category(), "fsync " + path_.string());
  seq_ = event.seq;
  counters_.add(event);
  return event;
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

EventCounters EventLog::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

}  // namespace portrait
