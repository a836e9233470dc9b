#pragma once

// Participant-side end of the live wire protocol: message builders, schema
// checks for both directions, and a blocking client connection.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "rtms/live.hpp"

namespace rtms::client {

nlohmann::json hello(const std::string& client_name);
nlohmann::json prompt_response(int prompt_id, bool accepted);
nlohmann::json help_toggle(bool enabled);
nlohmann::json bug_resolved(const std::string& bug_id, TimeMs t);
nlohmann::json bye();

/// First schema violation of a client -> server message, if any.
std::optional<std::string> check_outbound(const nlohmann::json& msg);

/// First schema violation of a server -> client message, if any.
std::optional<std::string> check_inbound(const nlohmann::json& msg);

class FeedbackClient {
 public:
  /// Connects and sends hello. Throws ConfigError when the server is absent.
  FeedbackClient(const std::string& host, std::uint16_t port, const std::string& name = "rtms-client");

  /// Next server message; empty once the server has closed the connection.
  /// Throws ProtocolError for a line that is not a valid server message.
  std::optional<nlohmann::json> next();

  /// Throws ProtocolError when `msg` is not a valid client message.
  bool send(const nlohmann::json& msg);

  bool answer(int prompt_id, bool accepted) { return send(prompt_response(prompt_id, accepted)); }
  bool toggle_help(bool enabled) { return send(help_toggle(enabled)); }
  bool resolve(const std::string& bug_id, TimeMs t) { return send(bug_resolved(bug_id, t)); }
  bool send_bye() { return send(bye()); }
  /// Drops the connection without bye.
  void disconnect() { sock_.close(); }

 private:
  LineSocket sock_;
};

}  // namespace rtms::client
