#include "rtms/feedback_protocol.hpp"

#include "rtms/error.hpp"

namespace rtms::client {

using nlohmann::json;

json hello(const std::string& client_name) {
  return {{"type", "hello"}, {"client", client_name}, {"version", kProtocolVersion}};
}

json prompt_response(int prompt_id, bool accepted) {
  return {{"type", "prompt_response"}, {"prompt_id", prompt_id}, {"accepted", accepted}};
}

json help_toggle(bool enabled) { return {{"type", "help_toggle"}, {"enabled", enabled}}; }

json bug_resolved(const std::string& bug_id, TimeMs t) {
  return {{"type", "bug_resolved"}, {"bug_id", bug_id}, {"t", t}};
}

json bye() { return {{"type", "bye"}}; }

namespace {

using Check = bool (json::*)() const noexcept;

std::optional<std::string> require(const json& msg, const char* key, Check ok, const char* what) {
  if (!msg.contains(key)) return "'" + msg["type"].get<std::string>() + "' lacks '" + key + "'";
  if (!(msg[key].*ok)()) return "'" + std::string(key) + "' must be " + what;
  return std::nullopt;
}

std::optional<std::string> require_all(
    const json& msg, std::initializer_list<std::tuple<const char*, Check, const char*>> fields) {
  for (const auto& [key, ok, what] : fields) {
    if (auto e = require(msg, key, ok, what)) return e;
  }
  return std::nullopt;
}

std::optional<std::string> typed(const json& msg) {
  if (!msg.is_object()) return "message is not an object";
  if (!msg.contains("type") || !msg["type"].is_string()) return "message without a string 'type'";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_outbound(const json& msg) {
  if (auto e = typed(msg)) return e;
  const auto type = msg["type"].get<std::string>();
  if (type == "hello") {
    return require_all(msg, {{"client", &json::is_string, "a string"}, {"version", &json::is_string, "a string"}});
  }
  if (type == "prompt_response") {
    return require_all(msg, {{"prompt_id", &json::is_number_integer, "an integer"},
                             {"accepted", &json::is_boolean, "a boolean"}});
  }
  if (type == "help_toggle") return require_all(msg, {{"enabled", &json::is_boolean, "a boolean"}});
  if (type == "bug_resolved") {
    return require_all(msg, {{"bug_id", &json::is_string, "a string"}, {"t", &json::is_number_integer, "an integer"}});
  }
  if (type == "bye") return std::nullopt;
  return "unknown client message type '" + type + "'";
}

std::optional<std::string> check_inbound(const json& msg) {
  if (auto e = typed(msg)) return e;
  const auto type = msg["type"].get<std::string>();
  if (type == "session_config") {
    return require_all(msg, {{"mode", &json::is_string, "a string"}, {"version", &json::is_string, "a string"}});
  }
  if (type == "index_update") {
    if (auto e = require_all(msg, {{"t", &json::is_number_integer, "an integer"},
                                   {"signal", &json::is_string, "a string"},
                                   {"value", &json::is_number, "a number"}})) {
      return e;
    }
    // theta is null while the mode has no baseline for the signal.
    if (!msg.contains("theta")) return std::string("'index_update' lacks 'theta'");
    if (!msg["theta"].is_number() && !msg["theta"].is_null()) return std::string("'theta' must be a number or null");
    return std::nullopt;
  }
  if (type == "prompt") {
    return require_all(msg, {{"prompt_id", &json::is_number_integer, "an integer"},
                             {"source", &json::is_string, "a string"},
                             {"text", &json::is_string, "a string"}});
  }
  if (type == "hint") {
    return require_all(msg, {{"prompt_id", &json::is_number_integer, "an integer"},
                             {"bug_id", &json::is_string, "a string"},
                             {"text", &json::is_string, "a string"},
                             {"source_label", &json::is_string, "a string"}});
  }
  if (type == "session_summary") {
    return require_all(msg, {{"mode", &json::is_string, "a string"},
                             {"aborted", &json::is_boolean, "a boolean"}});
  }
  if (type == "error") {
    return require_all(msg, {{"error", &json::is_string, "a string"}, {"message", &json::is_string, "a string"}});
  }
  return "unknown server message type '" + type + "'";
}

FeedbackClient::FeedbackClient(const std::string& host, std::uint16_t port, const std::string& name)
    : sock_(LineSocket::connect(host, port)) {
  send(hello(name));
}

std::optional<json> FeedbackClient::next() {
  const auto line = sock_.read_line();
  if (!line) return std::nullopt;
  json msg = json::parse(*line, nullptr, false);
  if (msg.is_discarded()) throw ProtocolError("server sent non-JSON line");
  if (auto e = check_inbound(msg)) throw ProtocolError(*e);
  return msg;
}

bool FeedbackClient::send(const json& msg) {
  if (auto e = check_outbound(msg)) throw ProtocolError(*e);
  return sock_.send_json(msg);
}

}  // namespace rtms::client
