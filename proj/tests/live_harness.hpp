#pragma once

#include <future>
#include <thread>

#include "rtms/feedback_protocol.hpp"
#include "rtms/live.hpp"

namespace testutil {

/// Runs a live server on an ephemeral port in a background thread.
class LiveServer {
 public:
  explicit LiveServer(rtms::SessionConfig cfg) {
    std::promise<std::uint16_t> bound;
    auto port = bound.get_future();
    result_ = std::async(std::launch::async, [cfg = std::move(cfg), p = std::move(bound)]() mutable {
      rtms::LiveOptions opts;
      opts.on_listening = [&p](std::uint16_t port) { p.set_value(port); };
      return rtms::run_live(cfg, opts);
    });
    port_ = port.get();
  }

  std::uint16_t port() const { return port_; }
  rtms::SessionLog log() { return result_.get(); }

 private:
  std::future<rtms::SessionLog> result_;
  std::uint16_t port_ = 0;
};

}  // namespace testutil
