#pragma once

// Live session server: one client over a line-delimited JSON socket.
//
// server -> client: session_config, index_update, prompt, hint,
//                   session_summary, error
// client -> server: hello, prompt_response, help_toggle, bug_resolved, bye

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "rtms/session.hpp"

namespace rtms {

/// Blocking TCP stream with newline framing.
class LineSocket {
 public:
  LineSocket() = default;
  explicit LineSocket(int fd) : fd_(fd) {}
  LineSocket(LineSocket&& o) noexcept;
  LineSocket& operator=(LineSocket&& o) noexcept;
  LineSocket(const LineSocket&) = delete;
  LineSocket& operator=(const LineSocket&) = delete;
  ~LineSocket();

  static LineSocket connect(const std::string& host, std::uint16_t port);

  bool valid() const noexcept { return fd_ >= 0; }
  /// Returns false once the peer is gone.
  bool send_line(const std::string& line);
  bool send_json(const nlohmann::json& msg) { return send_line(msg.dump()); }
  /// Empty on EOF or error.
  std::optional<std::string> read_line();
  void shutdown();
  void close();

 private:
  int fd_ = -1;
  std::string buffer_;
};

struct LiveOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  /// Called with the bound port once listening.
  std::function<void(std::uint16_t)> on_listening;
};

/// Serves one session. Samples come from the configured stream files, paced
/// in stream time (realtime) or in lockstep with the client (max: the server
/// waits for a client message whenever a prompt is open). A client
/// disconnect before the end yields a partial log with `aborted` set.
SessionLog run_live(const SessionConfig& cfg, const LiveOptions& opts);

/// Maps a client message to a session event, or nullopt for hello/bye.
/// Throws ProtocolError for unknown types or missing fields.
std::optional<ClientEvent> client_message_to_event(const nlohmann::json& msg, TimeMs now);

}  // namespace rtms
