#pragma once

// Sensor sample types, the on-disk CSV stream formats, and the deterministic
// multi-stream merge that every downstream stage consumes.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rtms {

/// Milliseconds since the session epoch.
using TimeMs = std::int64_t;

inline constexpr TimeMs kReorderToleranceMs = 50;

struct PupilSample {
  TimeMs t = 0;
  double left_mm = 0.0;
  double right_mm = 0.0;
  bool valid = false;

  friend bool operator==(const PupilSample&, const PupilSample&) = default;
};

enum class BeatKind : std::uint8_t { HR, RR };

struct BeatSample {
  TimeMs t = 0;
  BeatKind kind = BeatKind::HR;
  double value = 0.0;  // bpm for HR, milliseconds for RR
  bool in_range = true;

  friend bool operator==(const BeatSample&, const BeatSample&) = default;
};

struct GazeSample {
  TimeMs t = 0;
  int line = 0;  // 1-based source line
  bool valid = false;

  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

enum class ClientEventKind : std::uint8_t { Accept, Decline, Help, Resolve, Dismiss, Bye };

/// Input originating from the participant side: prompt answers, the Help
/// toggle, bug resolutions. `value` holds the toggle state ("0"/"1") or bug id.
struct ClientEvent {
  TimeMs t = 0;
  ClientEventKind kind = ClientEventKind::Accept;
  std::string value;

  friend bool operator==(const ClientEvent&, const ClientEvent&) = default;
};

/// Payload alternatives are declared in tie-break order: at equal t a pupil
/// sample sorts before a beat, a beat before gaze, gaze before client input.
using SensorPayload = std::variant<PupilSample, BeatSample, GazeSample, ClientEvent>;

struct SensorEvent {
  TimeMs t = 0;
  SensorPayload payload;

  std::size_t rank() const noexcept { return payload.index(); }
  friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

bool beat_value_in_range(BeatKind kind, double value);

/// Diameter used downstream: mean of both eyes when both are usable, else the
/// usable eye, else nothing.
std::optional<double> pupil_diameter(const PupilSample& s);

// CSV readers. Headers are mandatory; LF and CRLF are accepted. Rows may
// arrive up to kReorderToleranceMs late and are re-sorted stably; anything
// later raises OrderingError.
std::vector<PupilSample> parse_pupil_csv(std::istream& in);
std::vector<BeatSample> parse_beats_csv(std::istream& in, BeatKind kind);
std::vector<GazeSample> parse_gaze_csv(std::istream& in);
std::vector<ClientEvent> parse_client_events_csv(std::istream& in);

void write_pupil_csv(std::ostream& out, const std::vector<PupilSample>& samples);
void write_beats_csv(std::ostream& out, const std::vector<BeatSample>& samples);
void write_gaze_csv(std::ostream& out, const std::vector<GazeSample>& samples);
void write_client_events_csv(std::ostream& out, const std::vector<ClientEvent>& events);

std::string to_string(ClientEventKind kind);
std::optional<ClientEventKind> client_event_kind_from(const std::string& s);

template <class Sample>
std::vector<SensorEvent> to_events(const std::vector<Sample>& samples) {
  std::vector<SensorEvent> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(SensorEvent{s.t, SensorPayload{s}});
  return out;
}

/// Merges individually time-ordered streams into one totally ordered sequence.
/// Ties: payload rank, then stream position in `streams`, then input order.
std::vector<SensorEvent> merge_streams(const std::vector<std::vector<SensorEvent>>& streams);

}  // namespace rtms
