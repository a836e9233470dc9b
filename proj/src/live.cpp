#include "rtms/live.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "rtms/error.hpp"

namespace rtms {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

json error_message(const std::string& kind, const std::string& msg) {
  return {{"type", "error"}, {"error", kind}, {"message", msg}};
}

// Lines read by the receiver thread; nullopt marks disconnect.
class Inbox {
 public:
  void push(std::optional<std::string> line) {
    {
      std::lock_guard lock(mu_);
      q_.push_back(std::move(line));
    }
    cv_.notify_one();
  }

  /// Waits until a line arrives or `until` passes; false on timeout.
  bool wait_pop(std::optional<std::string>& out, std::optional<Clock::time_point> until) {
    std::unique_lock lock(mu_);
    const auto ready = [&] { return !q_.empty(); };
    if (until) {
      if (!cv_.wait_until(lock, *until, ready)) return false;
    } else {
      cv_.wait(lock, ready);
    }
    out = std::move(q_.front());
    q_.pop_front();
    return true;
  }

  bool try_pop(std::optional<std::string>& out) {
    std::lock_guard lock(mu_);
    if (q_.empty()) return false;
    out = std::move(q_.front());
    q_.pop_front();
    return true;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::optional<std::string>> q_;
};

int listen_on(const std::string& host, std::uint16_t port, std::uint16_t& bound) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw ConfigError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw ConfigError("invalid listen address '" + host + "'");
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 1) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw ConfigError("cannot listen on " + host + ":" + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  bound = ntohs(addr.sin_port);
  return fd;
}

}  // namespace

LineSocket::LineSocket(LineSocket&& o) noexcept : fd_(o.fd_), buffer_(std::move(o.buffer_)) { o.fd_ = -1; }

LineSocket& LineSocket::operator=(LineSocket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    buffer_ = std::move(o.buffer_);
    o.fd_ = -1;
  }
  return *this;
}

LineSocket::~LineSocket() { close(); }

LineSocket LineSocket::connect(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res) {
    throw ConfigError("cannot resolve " + host);
  }
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  const bool ok = fd >= 0 && ::connect(fd, res->ai_addr, res->ai_addrlen) == 0;
  ::freeaddrinfo(res);
  if (!ok) {
    if (fd >= 0) ::close(fd);
    throw ConfigError("cannot connect to " + host + ":" + std::to_string(port));
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return LineSocket(fd);
}

bool LineSocket::send_line(const std::string& line) {
  if (fd_ < 0) return false;
  std::string data = line + '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const auto n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<std::string> LineSocket::read_line() {
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (fd_ < 0) return std::nullopt;
    char chunk[4096];
    const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return std::nullopt;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineSocket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void LineSocket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

std::optional<ClientEvent> client_message_to_event(const json& msg, TimeMs now) {
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    throw ProtocolError("message without a string 'type'");
  }
  const auto type = msg["type"].get<std::string>();
  const auto need = [&](const char* key, bool ok) {
    if (!msg.contains(key) || !ok) throw ProtocolError(type + " requires '" + key + "'");
  };
  if (type == "hello" || type == "bye") return std::nullopt;
  if (type == "prompt_response") {
    need("prompt_id", msg.contains("prompt_id") && msg["prompt_id"].is_number_integer());
    need("accepted", msg.contains("accepted") && msg["accepted"].is_boolean());
    return ClientEvent{now, msg["accepted"].get<bool>() ? ClientEventKind::Accept : ClientEventKind::Decline,
                       std::to_string(msg["prompt_id"].get<int>())};
  }
  if (type == "help_toggle") {
    need("enabled", msg.contains("enabled") && msg["enabled"].is_boolean());
    return ClientEvent{now, ClientEventKind::Help, msg["enabled"].get<bool>() ? "1" : "0"};
  }
  if (type == "bug_resolved") {
    need("bug_id", msg.contains("bug_id") && msg["bug_id"].is_string());
    return ClientEvent{now, ClientEventKind::Resolve, msg["bug_id"].get<std::string>()};
  }
  throw ProtocolError("unknown message type '" + type + "'");
}

SessionLog run_live(const SessionConfig& cfg, const LiveOptions& opts) {
  validate(cfg);
  const auto in = load_inputs(cfg);
  const auto timeline = build_timeline(compute_indices(in, cfg), in.gaze, {});

  std::uint16_t port = 0;
  const int listen_fd = listen_on(opts.host, opts.port, port);
  if (opts.on_listening) opts.on_listening(port);
  const int fd = ::accept(listen_fd, nullptr, nullptr);
  ::close(listen_fd);
  if (fd < 0) throw ConfigError(std::string("accept: ") + std::strerror(errno));
  LineSocket sock(fd);
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);

  Inbox inbox;
  // The receiver owns reads; the session loop below is the only writer.
  std::thread receiver([&sock, &inbox] {
    for (;;) {
      auto line = sock.read_line();
      const bool eof = !line;
      inbox.push(std::move(line));
      if (eof) return;
    }
  });
  struct Joiner {
    LineSocket& s;
    std::thread& t;
    ~Joiner() {
      s.shutdown();
      if (t.joinable()) t.join();
    }
  } joiner{sock, receiver};

  SessionCore core(cfg, in.hints, in.cognitive, in.stress, [&sock](const json& m) { sock.send_json(m); });

  // Hello exchange.
  for (;;) {
    std::optional<std::string> line;
    inbox.wait_pop(line, std::nullopt);
    if (!line) {
      core.finish(core.now(), true, "client disconnected before hello");
      return core.log();
    }
    json msg = json::parse(*line, nullptr, false);
    if (msg.is_object() && msg.value("type", "") == "hello") break;
    sock.send_json(error_message("protocol_error", "expected hello"));
  }
  sock.send_json(core.session_config_message());

  bool aborted = false;
  // Returns false when the client has gone or said bye.
  const auto handle = [&](const std::optional<std::string>& line, TimeMs t) {
    if (!line) {
      aborted = true;
      return false;
    }
    const json msg = json::parse(*line, nullptr, false);
    if (msg.is_discarded()) {
      sock.send_json(error_message("protocol_error", "message is not JSON"));
      return true;
    }
    try {
      if (msg.is_object() && msg.value("type", "") == "bye") {
        return false;
      }
      if (msg.is_object() && msg.value("type", "") == "hello") {
        sock.send_json(error_message("protocol_error", "duplicate hello"));
        return true;
      }
      if (auto ev = client_message_to_event(msg, t)) {
        ev->t = std::max(t, core.now());
        core.client(*ev);
      }
    } catch (const Error& e) {
      sock.send_json(error_message(e.kind(), e.what()));
    }
    return true;
  };

  const auto wall0 = Clock::now();
  const TimeMs t0 = timeline.empty() ? cfg.task_start : timeline.front().t;
  const auto session_time = [&] {
    const double elapsed = std::chrono::duration<double>(Clock::now() - wall0).count();
    return t0 + static_cast<TimeMs>(elapsed * cfg.speed_factor * 1000.0);
  };
  const auto due_at = [&](TimeMs t) {
    return wall0 + std::chrono::microseconds(static_cast<std::int64_t>(static_cast<double>(t - t0) * 1000.0 /
                                                                       cfg.speed_factor));
  };
  const auto prompt_open = [&] { return core.engine().state().phase == Phase::Prompted; };

  bool running = true;
  TimeMs end = t0;
  for (std::size_t i = 0; running && i <= timeline.size(); ++i) {
    const bool last = i == timeline.size();
    const TimeMs next_t = last ? (timeline.empty() ? t0 : timeline.back().t) : timeline[i].t;
    std::optional<std::string> line;
    if (cfg.speed == ReplaySpeed::Realtime) {
      while (running && inbox.wait_pop(line, due_at(next_t))) {
        running = handle(line, std::clamp(session_time(), core.now(), std::max(core.now(), next_t)));
      }
    } else {
      while (running && inbox.try_pop(line)) running = handle(line, core.now());
      while (running && prompt_open()) {
        inbox.wait_pop(line, std::nullopt);
        running = handle(line, core.now());
      }
    }
    if (!running || last) break;
    core.feed(timeline[i]);
    end = timeline[i].t;
  }
  core.finish(std::max(end, core.now()), aborted, aborted ? "client disconnected" : "");
  auto log = core.log();
  if (cfg.log_path) write_log(log, *cfg.log_path);
  return log;
}

}  // namespace rtms
