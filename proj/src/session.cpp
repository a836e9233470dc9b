#include "rtms/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "rtms/error.hpp"

namespace rtms {

namespace {

using nlohmann::json;

TimeMs to_ms(double seconds) { return static_cast<TimeMs>(std::llround(seconds * 1000.0)); }

std::ifstream open_input(const std::filesystem::path& p, const char* what) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw LoadError(std::string("cannot open ") + what + " file '" + p.string() + "'");
  return f;
}

template <class Fn>
auto parse_file(const std::filesystem::path& p, const char* what, Fn&& fn) {
  auto f = open_input(p, what);
  try {
    return fn(f);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), p.string() + ": " + e.what());
  }
}

BaselineProfile load_profile(const std::filesystem::path& p, IndexSource expected) {
  auto f = open_input(p, "baseline");
  auto prof = read_profile(f);
  if (prof.signal != expected) {
    throw LoadError("baseline '" + p.string() + "' is for " + to_string(prof.signal) + ", expected " +
                    to_string(expected));
  }
  return prof;
}

const std::set<std::string>& entry_kinds() {
  static const std::set<std::string> kinds{"index", "trigger", "prompt", "response",
                                           "hint",  "toggle",  "resolve", "summary"};
  return kinds;
}

std::optional<double> avg_time(int resolved, std::optional<TimeMs> last_resolve, TimeMs start) {
  if (resolved == 0 || !last_resolve) return std::nullopt;
  return static_cast<double>(*last_resolve - start) / 1000.0 / resolved;
}

}  // namespace

std::optional<AutoRespond> auto_respond_from(const std::string& s) {
  if (s == "none") return AutoRespond::None;
  if (s == "accept") return AutoRespond::Accept;
  if (s == "decline") return AutoRespond::Decline;
  return std::nullopt;
}

void validate(const SessionConfig& cfg) {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  positive(cfg.ipa.window_s, "ipa window");
  positive(cfg.ipa.hop_s, "ipa hop");
  positive(cfg.stress.window_s, "stress window");
  positive(cfg.stress.hop_s, "stress hop");
  positive(cfg.speed_factor, "speed factor");
  positive(cfg.hint_dismiss_s, "hint dismiss delay");
  if (cfg.cooldown_s < 0.0 || cfg.timeout_s < 0.0 || cfg.response_delay_s < 0.0) {
    throw ConfigError("cooldown, timeout and response delay must be >= 0");
  }
}

SessionInputs load_inputs(const SessionConfig& cfg) {
  SessionInputs in;
  if (cfg.pupil_path) in.pupil = parse_file(*cfg.pupil_path, "pupil", [](auto& f) { return parse_pupil_csv(f); });
  if (cfg.hr_path) {
    in.beats = parse_file(*cfg.hr_path, "hr", [](auto& f) { return parse_beats_csv(f, BeatKind::HR); });
  }
  if (cfg.rr_path) {
    auto rr = parse_file(*cfg.rr_path, "rr", [](auto& f) { return parse_beats_csv(f, BeatKind::RR); });
    in.beats.insert(in.beats.end(), rr.begin(), rr.end());
    std::stable_sort(in.beats.begin(), in.beats.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  }
  if (cfg.gaze_path) in.gaze = parse_file(*cfg.gaze_path, "gaze", [](auto& f) { return parse_gaze_csv(f); });
  if (cfg.client_events_path) {
    in.client = parse_file(*cfg.client_events_path, "client events", [](auto& f) { return parse_client_events_csv(f); });
  }
  if (cfg.hints_path) {
    auto f = open_input(*cfg.hints_path, "hints");
    in.hints = HintDB::load(f);
  }
  if (cfg.cognitive_baseline_path) in.cognitive = load_profile(*cfg.cognitive_baseline_path, IndexSource::Cognitive);
  if (cfg.stress_baseline_path) in.stress = load_profile(*cfg.stress_baseline_path, IndexSource::Stress);
  return in;
}

std::string to_json_line(const LogEntry& e) {
  json o = e.payload;
  o["t"] = e.t;
  o["kind"] = e.kind;
  return o.dump();
}

std::string SessionLog::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

int TimelineEvent::rank() const {
  if (const auto* ix = std::get_if<IndexEvent>(&item)) return ix->source == IndexSource::Cognitive ? 0 : 1;
  return std::holds_alternative<GazeSample>(item) ? 2 : 3;
}

IndexStreams compute_indices(const SessionInputs& in, const SessionConfig& cfg) {
  IndexStreams out;
  if (!in.pupil.empty()) out.cognitive = ipa_series(clean_pupil(in.pupil, cfg.preprocess), cfg.ipa);
  if (!in.beats.empty()) out.stress = stress_index_series(heart_rate_from(in.beats).points, cfg.stress);
  return out;
}

std::vector<TimelineEvent> build_timeline(const IndexStreams& idx, const std::vector<GazeSample>& gaze,
                                          const std::vector<ClientEvent>& client) {
  std::vector<TimelineEvent> tl;
  tl.reserve(idx.cognitive.size() + idx.stress.size() + gaze.size() + client.size());
  for (const auto& p : idx.cognitive) tl.push_back({p.t, IndexEvent{IndexSource::Cognitive, p}});
  for (const auto& p : idx.stress) tl.push_back({p.t, IndexEvent{IndexSource::Stress, p}});
  for (const auto& g : gaze) tl.push_back({g.t, g});
  for (const auto& c : client) tl.push_back({c.t, c});
  std::stable_sort(tl.begin(), tl.end(), [](const TimelineEvent& a, const TimelineEvent& b) {
    return a.t != b.t ? a.t < b.t : a.rank() < b.rank();
  });
  return tl;
}

SessionCore::SessionCore(const SessionConfig& cfg, HintDB hints, std::optional<BaselineProfile> cognitive,
                         std::optional<BaselineProfile> stress, Emit emit)
    : cfg_(cfg),
      engine_(EngineConfig{cfg.mode, std::move(cognitive), std::move(stress), cfg.cooldown_s, cfg.timeout_s}),
      hints_(std::move(hints)),
      emit_(std::move(emit)),
      now_(cfg.task_start) {
  validate(cfg_);
  for (auto s : {IndexSource::Cognitive, IndexSource::Stress}) {
    if (admits(cfg_.mode, s) && !engine_.theta(s)) {
      throw ConfigError("mode " + to_string(cfg_.mode) + " requires a " + to_string(s) + " baseline");
    }
  }
}

json SessionCore::session_config_message() const {
  json m{{"type", "session_config"},
         {"version", kProtocolVersion},
         {"mode", to_string(cfg_.mode)},
         {"cooldown_s", cfg_.cooldown_s},
         {"timeout_s", cfg_.timeout_s},
         {"help_enabled", engine_.state().help_enabled}};
  json bugs = json::array();
  for (const auto& b : hints_.bugs()) {
    bugs.push_back({{"bug_id", b.bug_id}, {"lines", {b.line_start, b.line_end}}, {"kind", to_string(b.kind)}});
  }
  m["bugs"] = bugs;
  for (auto s : {IndexSource::Cognitive, IndexSource::Stress}) {
    if (const auto th = engine_.theta(s)) m["theta"][to_string(s)] = *th;
  }
  return m;
}

void SessionCore::append(TimeMs t, const char* kind, json payload) {
  log_.entries.push_back(LogEntry{t, kind, std::move(payload)});
}

void SessionCore::require_open() {
  if (finished_) throw ProtocolError("session already finished");
}

void SessionCore::advance_to(TimeMs t) {
  require_open();
  for (;;) {
    std::optional<TimeMs> deadline = engine_.prompt_deadline();
    std::optional<TimeMs> auto_at;
    if (deadline && cfg_.auto_respond != AutoRespond::None) {
      auto_at = engine_.state().prompt_opened_at + to_ms(cfg_.response_delay_s);
    }
    // At equal times the deadline wins.
    if (deadline && *deadline <= t && (!auto_at || *deadline <= *auto_at)) {
      const int id = engine_.state().open_prompt;
      now_ = std::max(now_, *deadline);
      engine_.prompt_timeout(*deadline);
      append(*deadline, "response", {{"prompt_id", id}, {"accepted", false}, {"action", "timeout"}});
      continue;
    }
    if (auto_at && *auto_at <= t) {
      now_ = std::max(now_, *auto_at);
      respond(engine_.state().open_prompt, cfg_.auto_respond == AutoRespond::Accept, *auto_at, "auto");
      continue;
    }
    if (hint_dismiss_at_ && *hint_dismiss_at_ <= t) {
      const TimeMs at = *hint_dismiss_at_;
      hint_dismiss_at_.reset();
      now_ = std::max(now_, at);
      const int id = engine_.state().open_prompt;
      engine_.on_hint_dismissed(at);
      append(at, "response", {{"prompt_id", id}, {"action", "dismiss"}});
      continue;
    }
    break;
  }
  now_ = std::max(now_, t);
  engine_.advance(now_);
}

void SessionCore::respond(int prompt_id, bool accepted, TimeMs t, const char* action) {
  const TriggerEvent trigger = *last_trigger_;
  const bool available = hints_.has_unresolved();
  const auto outcome = engine_.on_prompt_response(prompt_id, accepted, t, available);
  json payload{{"prompt_id", prompt_id}, {"accepted", accepted}, {"action", action}};
  if (outcome == ResponseOutcome::NoHint) payload["no_hint"] = true;
  append(t, "response", std::move(payload));
  if (outcome != ResponseOutcome::HintRequested) return;

  const auto hint = hints_.select_hint(last_gaze_, t, trigger);
  json h{{"prompt_id", hint->prompt_id},
         {"bug_id", hint->bug_id},
         {"text", hint->text},
         {"source_label", hint->source_label}};
  append(t, "hint", h);
  if (emit_) {
    h["type"] = "hint";
    emit_(h);
  }
  hint_dismiss_at_ = t + to_ms(cfg_.hint_dismiss_s);
}

void SessionCore::index(TimeMs t, IndexSource source, const IndexPoint& p) {
  advance_to(t);
  const auto th = engine_.theta(source);
  json payload{{"signal", to_string(source)}, {"value", p.value}, {"coverage", p.coverage}};
  if (th) payload["theta"] = *th;
  append(t, "index", payload);
  if (emit_) {
    json m{{"type", "index_update"}, {"t", t}, {"signal", to_string(source)}, {"value", p.value}};
    m["theta"] = th ? json(*th) : json(nullptr);
    emit_(m);
  }
  const auto trig = engine_.on_index(t, source, p.value);
  if (!trig) return;
  ++triggers_;
  last_trigger_ = trig;
  append(t, "trigger",
         {{"prompt_id", trig->prompt_id},
          {"source", to_string(trig->source)},
          {"value", trig->index_value},
          {"theta", trig->theta}});
  append(t, "prompt", {{"prompt_id", trig->prompt_id}, {"source", to_string(trig->source)}, {"text", kPromptText}});
  if (emit_) {
    emit_({{"type", "prompt"}, {"prompt_id", trig->prompt_id}, {"source", to_string(trig->source)}, {"text", kPromptText}});
  }
}

void SessionCore::gaze(const GazeSample& g) {
  advance_to(g.t);
  if (g.valid) last_gaze_ = GazeFix{g.line, g.t};
}

void SessionCore::client(const ClientEvent& e) {
  advance_to(e.t);
  const TimeMs t = now_;
  switch (e.kind) {
    case ClientEventKind::Accept:
    case ClientEventKind::Decline: {
      int id = engine_.state().open_prompt;
      if (!e.value.empty()) {
        try {
          id = std::stoi(e.value);
        } catch (const std::exception&) {
          throw ProtocolError("prompt id '" + e.value + "' is not an integer");
        }
      }
      if (engine_.state().phase != Phase::Prompted || id != engine_.state().open_prompt) {
        throw ProtocolError("response to prompt " + std::to_string(id) + " but " +
                            (engine_.state().phase == Phase::Prompted
                                 ? "prompt " + std::to_string(engine_.state().open_prompt) + " is open"
                                 : std::string("no prompt is open")));
      }
      respond(id, e.kind == ClientEventKind::Accept, t, "client");
      break;
    }
    case ClientEventKind::Help: {
      const bool enabled = e.value == "1";
      const auto closed = engine_.on_help_toggle(enabled, t);
      json payload{{"enabled", enabled}};
      if (closed) {
        payload["closed_prompt_id"] = *closed;
        hint_dismiss_at_.reset();
      }
      append(t, "toggle", std::move(payload));
      break;
    }
    case ClientEventKind::Resolve:
      hints_.mark_resolved(e.value, t);
      append(t, "resolve", {{"bug_id", e.value}});
      break;
    case ClientEventKind::Dismiss: {
      const int id = engine_.state().open_prompt;
      engine_.on_hint_dismissed(t);
      hint_dismiss_at_.reset();
      append(t, "response", {{"prompt_id", id}, {"action", "dismiss"}});
      break;
    }
    case ClientEventKind::Bye:
      break;
  }
}

void SessionCore::feed(const TimelineEvent& e) {
  std::visit(
      [&](const auto& item) {
        using T = std::decay_t<decltype(item)>;
        if constexpr (std::is_same_v<T, IndexEvent>) {
          index(e.t, item.source, item.point);
        } else if constexpr (std::is_same_v<T, GazeSample>) {
          gaze(item);
        } else {
          client(item);
        }
      },
      e.item);
}

void SessionCore::finish(TimeMs t, bool aborted, const std::string& reason) {
  advance_to(std::max(t, now_));
  int resolved = 0;
  int hints = 0;
  std::optional<TimeMs> last_resolve;
  for (const auto& e : log_.entries) {
    if (e.kind == "resolve") {
      ++resolved;
      last_resolve = e.t;
    } else if (e.kind == "hint") {
      ++hints;
    }
  }
  json s{{"mode", to_string(cfg_.mode)},
         {"bugs_resolved", resolved},
         {"feedback_count", hints},
         {"triggers", triggers_},
         {"task_duration_s", static_cast<double>(now_ - cfg_.task_start) / 1000.0},
         {"aborted", aborted}};
  const auto avg = avg_time(resolved, last_resolve, cfg_.task_start);
  s["avg_time_per_bug"] = avg ? json(*avg) : json(nullptr);
  if (cfg_.expertise) s["expertise"] = *cfg_.expertise;
  if (aborted && !reason.empty()) s["abort_reason"] = reason;
  append(now_, "summary", s);
  log_.aborted = aborted;
  finished_ = true;
  if (emit_) {
    s["type"] = "session_summary";
    emit_(s);
  }
}

SessionLog run_session(const SessionInputs& in, const SessionConfig& cfg, const std::function<void(TimeMs)>& pace) {
  validate(cfg);
  if (admits(cfg.mode, IndexSource::Cognitive) && in.pupil.empty()) {
    throw ConfigError("mode " + to_string(cfg.mode) + " requires a pupil stream");
  }
  if (admits(cfg.mode, IndexSource::Stress) && in.beats.empty()) {
    throw ConfigError("mode " + to_string(cfg.mode) + " requires a heart stream");
  }
  SessionCore core(cfg, in.hints, in.cognitive, in.stress);
  const auto timeline = build_timeline(compute_indices(in, cfg), in.gaze, in.client);

  TimeMs end = cfg.task_start;
  if (!in.pupil.empty()) end = std::max(end, in.pupil.back().t);
  if (!in.beats.empty()) end = std::max(end, in.beats.back().t);
  if (!in.gaze.empty()) end = std::max(end, in.gaze.back().t);
  if (!timeline.empty()) end = std::max(end, timeline.back().t);

  std::vector<std::string> rejected;
  for (const auto& e : timeline) {
    if (pace) pace(e.t);
    if (const auto* c = std::get_if<ClientEvent>(&e.item); c && c->kind == ClientEventKind::Bye) {
      end = e.t;
      break;
    }
    try {
      core.feed(e);
    } catch (const ProtocolError& err) {
      if (!std::holds_alternative<ClientEvent>(e.item)) throw;
      rejected.push_back("t=" + std::to_string(e.t) + ": " + err.what());
    }
  }
  core.finish(end);
  auto log = core.log();
  log.rejected = std::move(rejected);
  return log;
}

SessionLog run_replay(const SessionConfig& cfg) {
  validate(cfg);
  const auto in = load_inputs(cfg);
  std::function<void(TimeMs)> pace;
  if (cfg.speed == ReplaySpeed::Realtime) {
    const auto wall0 = std::chrono::steady_clock::now();
    std::optional<TimeMs> t0;
    pace = [wall0, t0, factor = cfg.speed_factor](TimeMs t) mutable {
      if (!t0) t0 = t;
      const auto due = wall0 + std::chrono::microseconds(
                                   static_cast<std::int64_t>(static_cast<double>(t - *t0) * 1000.0 / factor));
      std::this_thread::sleep_until(due);
    };
  }
  auto log = run_session(in, cfg, pace);
  if (cfg.log_path) write_log(log, *cfg.log_path);
  return log;
}

void write_log(const SessionLog& log, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LoadError("cannot write log '" + path.string() + "'");
  f << log.to_jsonl();
}

CalibrationResult calibrate(const std::vector<PupilSample>& pupil, const std::vector<BeatSample>& beats,
                            const SessionConfig& cfg) {
  validate(cfg);
  const auto fit = [&](const IndexSeries& series, IndexSource source, double window_s, RoslReport& report) {
    auto cal = cfg.calibration;
    cal.window_s = window_s;
    report = validate_rosl(series, cal);
    if (report.reason == "coverage") {
      throw InsufficientBaselineError(to_string(source) + " resting recording fails validation: " + report.reason);
    }
    return compute_baseline(series, source, cal);
  };
  if (pupil.empty()) throw InsufficientBaselineError("resting pupil stream is empty");
  if (beats.empty()) throw InsufficientBaselineError("resting heart stream is empty");

  CalibrationResult r;
  const auto clean = clean_pupil(pupil, cfg.preprocess);
  r.cognitive = fit(ipa_series(clean, cfg.ipa), IndexSource::Cognitive, cfg.ipa.window_s, r.cognitive_report);
  const auto stats = signal_stats(clean);
  r.cognitive.pupil_mean_mm = stats.mean;
  r.cognitive.pupil_sd_mm = stats.sd;
  r.stress = fit(stress_index_series(heart_rate_from(beats).points, cfg.stress), IndexSource::Stress,
                 cfg.stress.window_s, r.stress_report);
  return r;
}

CalibrationResult run_calibration(const SessionConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.pupil_path) throw ConfigError("calibration needs a resting pupil stream");
  if (!cfg.hr_path && !cfg.rr_path) throw ConfigError("calibration needs a resting heart stream");
  const auto in = load_inputs(cfg);
  auto r = calibrate(in.pupil, in.beats, cfg);
  std::filesystem::create_directories(out_dir);
  for (const auto* p : {&r.cognitive, &r.stress}) {
    const auto path = out_dir / (to_string(p->signal) + ".baseline.toml");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw LoadError("cannot write baseline '" + path.string() + "'");
    write_profile(f, *p);
  }
  return r;
}

SessionMetrics compute_metrics(std::istream& in, TimeMs task_start) {
  SessionMetrics m;
  std::string line;
  std::size_t n = 0;
  std::optional<TimeMs> prev;
  std::optional<TimeMs> last_resolve;
  std::optional<TimeMs> summary_t;
  TimeMs last_t = task_start;
  while (std::getline(in, line)) {
    ++n;
    const auto bad = [&](const std::string& why) { return LoadError("log line " + std::to_string(n) + ": " + why); };
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw bad("empty line");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw bad("not a JSON object");
    }
    if (!j.is_object()) throw bad("not a JSON object");
    if (!j.contains("t") || !j["t"].is_number_integer()) throw bad("missing integer 't'");
    if (!j.contains("kind") || !j["kind"].is_string()) throw bad("missing string 'kind'");
    const auto t = j["t"].get<TimeMs>();
    const auto kind = j["kind"].get<std::string>();
    if (!entry_kinds().count(kind)) throw bad("unknown kind '" + kind + "'");
    if (prev && t < *prev) throw bad("t decreases");
    if (summary_t) throw bad("entry after summary");
    prev = t;
    last_t = t;
    if (kind == "resolve") {
      if (!j.contains("bug_id") || !j["bug_id"].is_string()) throw bad("resolve without bug_id");
      ++m.bugs_resolved;
      last_resolve = t;
    } else if (kind == "hint") {
      if (!j.contains("prompt_id") || !j["prompt_id"].is_number_integer()) throw bad("hint without prompt_id");
      ++m.feedback_count;
    } else if (kind == "summary") {
      summary_t = t;
      if (j.contains("expertise") && j["expertise"].is_number_integer()) m.expertise = j["expertise"].get<int>();
      if (j.contains("mode") && j["mode"].is_string()) m.mode = j["mode"].get<std::string>();
      if (j.contains("aborted") && j["aborted"].is_boolean()) m.aborted = j["aborted"].get<bool>();
    }
  }
  if (n == 0) throw LoadError("log is empty");
  m.avg_time_per_bug = avg_time(m.bugs_resolved, last_resolve, task_start);
  m.task_duration_s = static_cast<double>(last_t - task_start) / 1000.0;
  return m;
}

SessionMetrics compute_metrics(const SessionLog& log, TimeMs task_start) {
  std::istringstream in(log.to_jsonl());
  return compute_metrics(in, task_start);
}

std::optional<std::string> check_log_grammar(const SessionLog& log) {
  std::set<int> triggered, prompted, accepted;
  std::size_t summaries = 0;
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    const auto& e = log.entries[i];
    const auto where = "entry " + std::to_string(i + 1) + " (" + e.kind + ")";
    if (i > 0 && e.t < log.entries[i - 1].t) return where + ": t decreases";
    if (!entry_kinds().count(e.kind)) return where + ": unknown kind";
    const int id = e.payload.value("prompt_id", 0);
    if (e.kind == "trigger") {
      triggered.insert(id);
    } else if (e.kind == "prompt") {
      if (!triggered.count(id)) return where + ": prompt without trigger";
      prompted.insert(id);
    } else if (e.kind == "response") {
      if (!prompted.count(id)) return where + ": response without prompt";
      if (e.payload.value("accepted", false)) accepted.insert(id);
    } else if (e.kind == "hint") {
      if (!triggered.count(id) || !prompted.count(id) || !accepted.count(id)) {
        return where + ": hint without trigger, prompt and accepting response";
      }
    } else if (e.kind == "summary") {
      ++summaries;
      if (i + 1 != log.entries.size()) return where + ": summary is not last";
    }
  }
  if (summaries != 1) return "expected exactly one summary, found " + std::to_string(summaries);
  return std::nullopt;
}

}  // namespace rtms
