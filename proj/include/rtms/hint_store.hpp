#pragma once

// Bug-specific hint database and gaze-aligned hint selection.

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "rtms/trigger_engine.hpp"

namespace rtms {

enum class BugKind : std::uint8_t { Syntactic, Logical };

struct BugRecord {
  std::string bug_id;
  int line_start = 1;
  int line_end = 1;
  BugKind kind = BugKind::Logical;
  std::vector<std::string> hints;
  std::optional<TimeMs> resolved_at;
};

struct HintRecord {
  int prompt_id = 0;
  std::string bug_id;
  std::string text;
  std::string source_label;
  TimeMs t = 0;

  friend bool operator==(const HintRecord&, const HintRecord&) = default;
};

/// Latest fixated source line and when it was sampled.
struct GazeFix {
  int line = 1;
  TimeMs t = 0;
};

inline constexpr TimeMs kGazeStaleMs = 2000;

std::string source_label(IndexSource source);
std::string to_string(BugKind k);

/// Line distance from `line` to [start, end]; zero inside.
int line_distance(int line, int start, int end);

class HintDB {
 public:
  HintDB() = default;
  explicit HintDB(std::vector<BugRecord> bugs);

  /// Parses `[[bug]]` entries. Throws LoadError naming the offending entry.
  static HintDB load(std::istream& in);

  const std::vector<BugRecord>& bugs() const noexcept { return bugs_; }
  std::size_t size() const noexcept { return bugs_.size(); }
  std::size_t unresolved() const;
  bool has_unresolved() const { return unresolved() > 0; }

  /// Bug a hint would target now, without recording a delivery. Nearest
  /// unresolved range to a fresh gaze line (ties: lowest line_start, then
  /// bug_id); with no fresh gaze, the unresolved bug with the lowest
  /// line_start.
  std::optional<std::size_t> choose(std::optional<GazeFix> gaze, TimeMs t) const;

  /// Chooses a bug and records the delivery; successive deliveries for one
  /// bug cycle through its hint list. Empty once every bug is resolved.
  std::optional<HintRecord> select_hint(std::optional<GazeFix> gaze, TimeMs t, const TriggerEvent& trigger);

  /// Throws ProtocolError for unknown or already-resolved ids.
  void mark_resolved(const std::string& bug_id, TimeMs t);

 private:
  std::vector<BugRecord> bugs_;
  std::vector<std::size_t> deliveries_;
};

}  // namespace rtms
