#pragma once

// Four-condition trigger state machine with the prompt -> accept/decline ->
// hint -> cooldown lifecycle and the participant's Help toggle.
//
//   idle --index > theta--> prompted --accept--> hint_shown --dismiss--> cooldown
//                              |  decline/timeout                           |
//                              +-------------------> cooldown --expiry--> idle
//
// Disabling help while prompted or hint_shown returns straight to idle.

#include <optional>
#include <string>

#include "rtms/calibration.hpp"
#include "rtms/index_point.hpp"

namespace rtms {

enum class ConditionMode : std::uint8_t { Control, Cognitive, Stress, Combined };

std::string to_string(ConditionMode m);
std::optional<ConditionMode> condition_mode_from(const std::string& s);

/// Whether `mode` reacts to index values from `source`.
bool admits(ConditionMode mode, IndexSource source);

enum class Phase : std::uint8_t { Idle, Prompted, HintShown, Cooldown };

std::string to_string(Phase p);

struct EngineConfig {
  ConditionMode mode = ConditionMode::Control;
  std::optional<BaselineProfile> cognitive;
  std::optional<BaselineProfile> stress;
  double cooldown_s = 30.0;
  double timeout_s = 30.0;
};

struct TriggerEvent {
  TimeMs t = 0;
  IndexSource source = IndexSource::Cognitive;
  double index_value = 0.0;
  double theta = 0.0;
  int prompt_id = 0;

  friend bool operator==(const TriggerEvent&, const TriggerEvent&) = default;
};

struct EngineState {
  Phase phase = Phase::Idle;
  bool help_enabled = true;
  TimeMs cooldown_until = 0;
  int feedback_count = 0;
  int open_prompt = 0;  // 0 when no prompt is open
  IndexSource open_source = IndexSource::Cognitive;
  TimeMs prompt_opened_at = 0;
};

enum class ResponseOutcome : std::uint8_t { HintRequested, NoHint, Declined };

class TriggerEngine {
 public:
  explicit TriggerEngine(EngineConfig cfg);

  /// Emits a trigger iff the mode admits `source`, value > theta, the engine
  /// is idle, any cooldown has expired, help is enabled, and the source has
  /// dropped to or below theta since it was last above it. Throws ConfigError
  /// when an admitted source has no baseline.
  std::optional<TriggerEvent> on_index(TimeMs t, IndexSource source, double value);

  /// Accepting moves to hint_shown and counts one delivered hint; with no hint
  /// available the engine returns to idle instead. Declining enters cooldown.
  /// Throws ProtocolError, leaving state unchanged, when `prompt_id` is not
  /// the open prompt.
  ResponseOutcome on_prompt_response(int prompt_id, bool accepted, TimeMs t, bool hint_available = true);

  /// Throws ProtocolError unless a hint is showing.
  void on_hint_dismissed(TimeMs t);

  /// Returns the prompt id closed by disabling help, if any.
  std::optional<int> on_help_toggle(bool enabled, TimeMs t);

  /// Resolves an unanswered prompt as a decline once t reaches its deadline.
  /// Returns true when a timeout fired.
  bool prompt_timeout(TimeMs t);

  /// Deadline of the open prompt, if any.
  std::optional<TimeMs> prompt_deadline() const;

  /// Expires a finished cooldown.
  void advance(TimeMs t);

  const EngineState& state() const noexcept { return state_; }
  const EngineConfig& config() const noexcept { return cfg_; }
  std::optional<double> theta(IndexSource source) const;

 private:
  void enter_cooldown(TimeMs from);

  EngineConfig cfg_;
  EngineState state_;
  int next_prompt_id_ = 1;
  bool armed_[2] = {true, true};
};

}  // namespace rtms
