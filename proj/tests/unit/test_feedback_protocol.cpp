#include <doctest.h>

#include <fstream>

#include "rtms/error.hpp"
#include "rtms/feedback_protocol.hpp"
#include "test_util.hpp"

using namespace rtms;
using nlohmann::json;

TEST_CASE("builders produce schema-valid messages") {
  for (const auto& m : {client::hello("ui"), client::prompt_response(1, true), client::help_toggle(false),
                        client::bug_resolved("B1", 1234), client::bye()}) {
    CHECK(client::check_outbound(m) == std::nullopt);
  }
  CHECK(client::hello("ui")["version"] == kProtocolVersion);
}

TEST_CASE("outbound schema violations") {
  CHECK(client::check_outbound(json::array()));
  CHECK(client::check_outbound({{"type", "shout"}}));
  CHECK(client::check_outbound({{"type", "prompt_response"}, {"prompt_id", 1}}));
  CHECK(client::check_outbound({{"type", "prompt_response"}, {"prompt_id", "1"}, {"accepted", true}}));
  CHECK(client::check_outbound({{"type", "help_toggle"}, {"enabled", 1}}));
  CHECK(client::check_outbound({{"type", "bug_resolved"}, {"bug_id", "B1"}}));
}

TEST_CASE("inbound schema") {
  CHECK_FALSE(client::check_inbound({{"type", "index_update"}, {"t", 1}, {"signal", "stress"}, {"value", 0.1}, {"theta", nullptr}}));
  CHECK(client::check_inbound({{"type", "index_update"}, {"t", 1}, {"signal", "stress"}, {"value", 0.1}}));
  CHECK_FALSE(client::check_inbound({{"type", "prompt"}, {"prompt_id", 1}, {"source", "stress"}, {"text", "x"}}));
  CHECK(client::check_inbound({{"type", "hint"}, {"prompt_id", 1}, {"bug_id", "B1"}, {"text", "x"}}));
  CHECK(client::check_inbound({{"type", "surprise"}}));
}

TEST_CASE("golden client transcript conforms") {
  std::ifstream in(testutil::fixture_dir() / "client_transcript.jsonl");
  REQUIRE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto m = json::parse(line);
    INFO(line);
    CHECK(client::check_outbound(m) == std::nullopt);
    if (m["type"] != "hello" && m["type"] != "bye") CHECK(client_message_to_event(m, 0));
    ++n;
  }
  CHECK(n == 7);
}

TEST_CASE("connecting to an absent server fails") {
  CHECK_THROWS_AS(client::FeedbackClient("127.0.0.1", 1), ConfigError);
}

TEST_CASE("sending on a closed socket fails") {
  LineSocket dummy;
  CHECK_FALSE(dummy.send_json(client::bye()));
}
