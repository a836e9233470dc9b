#include "rtms/trigger_engine.hpp"

#include <cmath>

#include "rtms/error.hpp"

namespace rtms {

namespace {

TimeMs to_ms(double seconds) { return static_cast<TimeMs>(std::llround(seconds * 1000.0)); }

std::size_t slot(IndexSource s) { return s == IndexSource::Cognitive ? 0 : 1; }

}  // namespace

std::string to_string(ConditionMode m) {
  switch (m) {
    case ConditionMode::Control: return "control";
    case ConditionMode::Cognitive: return "cognitive";
    case ConditionMode::Stress: return "stress";
    case ConditionMode::Combined: return "combined";
  }
  return "?";
}

std::optional<ConditionMode> condition_mode_from(const std::string& s) {
  for (auto m : {ConditionMode::Control, ConditionMode::Cognitive, ConditionMode::Stress, ConditionMode::Combined}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

bool admits(ConditionMode mode, IndexSource source) {
  switch (mode) {
    case ConditionMode::Control: return false;
    case ConditionMode::Cognitive: return source == IndexSource::Cognitive;
    case ConditionMode::Stress: return source == IndexSource::Stress;
    case ConditionMode::Combined: return true;
  }
  return false;
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "idle";
    case Phase::Prompted: return "prompted";
    case Phase::HintShown: return "hint_shown";
    case Phase::Cooldown: return "cooldown";
  }
  return "?";
}

TriggerEngine::TriggerEngine(EngineConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.cooldown_s < 0.0 || cfg_.timeout_s < 0.0) throw ConfigError("cooldown and timeout must be >= 0");
}

std::optional<double> TriggerEngine::theta(IndexSource source) const {
  const auto& p = source == IndexSource::Cognitive ? cfg_.cognitive : cfg_.stress;
  if (!p) return std::nullopt;
  return p->theta;
}

void TriggerEngine::advance(TimeMs t) {
  if (state_.phase == Phase::Cooldown && t >= state_.cooldown_until) state_.phase = Phase::Idle;
}

std::optional<TriggerEvent> TriggerEngine::on_index(TimeMs t, IndexSource source, double value) {
  if (!admits(cfg_.mode, source)) return std::nullopt;
  const auto th = theta(source);
  if (!th) throw ConfigError("mode " + to_string(cfg_.mode) + " has no " + to_string(source) + " baseline");
  advance(t);

  bool& armed = armed_[slot(source)];
  if (!(value > *th)) {
    armed = true;
    return std::nullopt;
  }
  // Supra-threshold: only the crossing instant can fire.
  const bool crossing = armed;
  armed = false;
  if (!crossing || !state_.help_enabled || state_.phase != Phase::Idle || t < state_.cooldown_until) {
    return std::nullopt;
  }

  TriggerEvent ev{t, source, value, *th, next_prompt_id_++};
  state_.phase = Phase::Prompted;
  state_.open_prompt = ev.prompt_id;
  state_.open_source = source;
  state_.prompt_opened_at = t;
  return ev;
}

void TriggerEngine::enter_cooldown(TimeMs from) {
  state_.phase = Phase::Cooldown;
  state_.open_prompt = 0;
  state_.cooldown_until = from + to_ms(cfg_.cooldown_s);
  advance(from);
}

ResponseOutcome TriggerEngine::on_prompt_response(int prompt_id, bool accepted, TimeMs t, bool hint_available) {
  if (state_.phase != Phase::Prompted) {
    throw ProtocolError("response to prompt " + std::to_string(prompt_id) + " but no prompt is open");
  }
  if (prompt_id != state_.open_prompt) {
    throw ProtocolError("response to prompt " + std::to_string(prompt_id) + " while prompt " +
                        std::to_string(state_.open_prompt) + " is open");
  }
  if (!accepted) {
    enter_cooldown(t);
    return ResponseOutcome::Declined;
  }
  if (!hint_available) {
    state_.phase = Phase::Idle;
    state_.open_prompt = 0;
    return ResponseOutcome::NoHint;
  }
  state_.phase = Phase::HintShown;
  ++state_.feedback_count;
  return ResponseOutcome::HintRequested;
}

void TriggerEngine::on_hint_dismissed(TimeMs t) {
  if (state_.phase != Phase::HintShown) {
    throw ProtocolError("hint dismissed while " + to_string(state_.phase));
  }
  enter_cooldown(t);
}

std::optional<int> TriggerEngine::on_help_toggle(bool enabled, TimeMs t) {
  state_.help_enabled = enabled;
  advance(t);
  if (enabled) return std::nullopt;
  if (state_.phase == Phase::Prompted || state_.phase == Phase::HintShown) {
    const int closed = state_.open_prompt;
    state_.phase = Phase::Idle;
    state_.open_prompt = 0;
    return closed;
  }
  return std::nullopt;
}

std::optional<TimeMs> TriggerEngine::prompt_deadline() const {
  if (state_.phase != Phase::Prompted) return std::nullopt;
  return state_.prompt_opened_at + to_ms(cfg_.timeout_s);
}

bool TriggerEngine::prompt_timeout(TimeMs t) {
  const auto deadline = prompt_deadline();
  if (!deadline || t < *deadline) return false;
  enter_cooldown(*deadline);
  return true;
}

}  // namespace rtms
