#pragma once

// Session orchestration: streams -> indices -> trigger engine -> hints, with
// an append-only JSON-lines event log.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rtms/calibration.hpp"
#include "rtms/hint_store.hpp"
#include "rtms/ipa.hpp"
#include "rtms/preprocess.hpp"
#include "rtms/signals.hpp"
#include "rtms/stress.hpp"
#include "rtms/trigger_engine.hpp"

namespace rtms {

inline constexpr const char* kPromptText = "Hey! Do you need help?";
inline constexpr const char* kProtocolVersion = "1";

enum class ReplaySpeed : std::uint8_t { Max, Realtime };

/// How replay answers prompts when no client event does.
enum class AutoRespond : std::uint8_t { None, Accept, Decline };

std::optional<AutoRespond> auto_respond_from(const std::string& s);

struct SessionConfig {
  ConditionMode mode = ConditionMode::Control;
  PreprocessConfig preprocess;
  IpaConfig ipa;
  StressConfig stress;
  CalibrationConfig calibration;
  double cooldown_s = 30.0;
  double timeout_s = 30.0;

  std::optional<std::filesystem::path> pupil_path;
  std::optional<std::filesystem::path> hr_path;
  std::optional<std::filesystem::path> rr_path;
  std::optional<std::filesystem::path> gaze_path;
  std::optional<std::filesystem::path> client_events_path;
  std::optional<std::filesystem::path> hints_path;
  std::optional<std::filesystem::path> cognitive_baseline_path;
  std::optional<std::filesystem::path> stress_baseline_path;
  std::optional<std::filesystem::path> log_path;

  ReplaySpeed speed = ReplaySpeed::Max;
  double speed_factor = 1.0;  // stream seconds per wall second in realtime
  std::optional<int> expertise;
  AutoRespond auto_respond = AutoRespond::None;
  double response_delay_s = 2.0;
  double hint_dismiss_s = 15.0;
  TimeMs task_start = 0;
};

/// Throws ConfigError.
void validate(const SessionConfig& cfg);

struct SessionInputs {
  std::vector<PupilSample> pupil;
  std::vector<BeatSample> beats;
  std::vector<GazeSample> gaze;
  std::vector<ClientEvent> client;
  HintDB hints;
  std::optional<BaselineProfile> cognitive;
  std::optional<BaselineProfile> stress;
};

/// Reads every configured path. Throws LoadError for missing files.
SessionInputs load_inputs(const SessionConfig& cfg);

struct LogEntry {
  TimeMs t = 0;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();
};

struct SessionLog {
  std::vector<LogEntry> entries;
  bool aborted = false;
  /// Client events that did not match the session state; not part of the log.
  std::vector<std::string> rejected;

  /// One JSON object per line, keys sorted, LF-terminated.
  std::string to_jsonl() const;
};

std::string to_json_line(const LogEntry& e);

struct IndexEvent {
  IndexSource source = IndexSource::Cognitive;
  IndexPoint point;
};

/// Timeline item; at equal t: cognitive index, stress index, gaze, client.
struct TimelineEvent {
  TimeMs t = 0;
  std::variant<IndexEvent, GazeSample, ClientEvent> item;
  int rank() const;
};

struct IndexStreams {
  IndexSeries cognitive;
  IndexSeries stress;
};

/// Index series for whichever signals are present in the inputs.
IndexStreams compute_indices(const SessionInputs& in, const SessionConfig& cfg);

std::vector<TimelineEvent> build_timeline(const IndexStreams& idx, const std::vector<GazeSample>& gaze,
                                          const std::vector<ClientEvent>& client);

/// Incremental session state shared by replay and live drivers. Callers feed
/// events in non-decreasing t; timers (prompt timeout, auto-response, hint
/// auto-dismiss) fire in time order before each event.
class SessionCore {
 public:
  using Emit = std::function<void(const nlohmann::json&)>;

  SessionCore(const SessionConfig& cfg, HintDB hints, std::optional<BaselineProfile> cognitive,
              std::optional<BaselineProfile> stress, Emit emit = {});

  void advance_to(TimeMs t);
  void feed(const TimelineEvent& e);
  void index(TimeMs t, IndexSource source, const IndexPoint& p);
  void gaze(const GazeSample& g);
  /// Throws ProtocolError for answers, dismissals or resolutions that do not
  /// match the session state; state is left unchanged.
  void client(const ClientEvent& e);
  /// Appends the summary. Further input is rejected.
  void finish(TimeMs t, bool aborted = false, const std::string& reason = {});

  const SessionLog& log() const noexcept { return log_; }
  const TriggerEngine& engine() const noexcept { return engine_; }
  const HintDB& hints() const noexcept { return hints_; }
  TimeMs now() const noexcept { return now_; }
  bool finished() const noexcept { return finished_; }
  nlohmann::json session_config_message() const;

 private:
  void append(TimeMs t, const char* kind, nlohmann::json payload);
  void respond(int prompt_id, bool accepted, TimeMs t, const char* action);
  void require_open();

  SessionConfig cfg_;
  TriggerEngine engine_;
  HintDB hints_;
  Emit emit_;
  SessionLog log_;
  TimeMs now_ = 0;
  bool finished_ = false;
  std::optional<GazeFix> last_gaze_;
  std::optional<TriggerEvent> last_trigger_;
  std::optional<TimeMs> hint_dismiss_at_;
  int triggers_ = 0;
};

/// Full pipeline over in-memory inputs. `pace` is called before each event.
SessionLog run_session(const SessionInputs& in, const SessionConfig& cfg,
                       const std::function<void(TimeMs)>& pace = {});

/// Loads inputs, runs the session, writes the log when a path is set.
SessionLog run_replay(const SessionConfig& cfg);

void write_log(const SessionLog& log, const std::filesystem::path& path);

struct CalibrationResult {
  BaselineProfile cognitive;
  BaselineProfile stress;
  RoslReport cognitive_report;
  RoslReport stress_report;
};

/// Baselines from resting-state pupil and heart streams.
CalibrationResult calibrate(const std::vector<PupilSample>& pupil, const std::vector<BeatSample>& beats,
                            const SessionConfig& cfg);

/// Reads RoSL streams from cfg paths and writes cognitive.baseline.toml and
/// stress.baseline.toml into `out_dir`.
CalibrationResult run_calibration(const SessionConfig& cfg, const std::filesystem::path& out_dir);

struct SessionMetrics {
  int bugs_resolved = 0;
  std::optional<double> avg_time_per_bug;
  double task_duration_s = 0.0;
  int feedback_count = 0;
  std::optional<int> expertise;
  std::optional<std::string> mode;
  bool aborted = false;
};

/// Pure function of the log. Throws LoadError naming the first bad line.
SessionMetrics compute_metrics(std::istream& log, TimeMs task_start = 0);
SessionMetrics compute_metrics(const SessionLog& log, TimeMs task_start = 0);

/// Every hint preceded by trigger, prompt and accepting response with the same
/// prompt id; t non-decreasing; exactly one summary, last. Returns the first
/// violation, if any.
std::optional<std::string> check_log_grammar(const SessionLog& log);

}  // namespace rtms
