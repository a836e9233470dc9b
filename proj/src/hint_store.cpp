#include "rtms/hint_store.hpp"

#include <algorithm>
#include <set>

#include "rtms/error.hpp"
#include "rtms/toml_lite.hpp"

namespace rtms {

std::string source_label(IndexSource source) {
  return source == IndexSource::Cognitive ? "Cognitive-Aware" : "Stress-Aware";
}

std::string to_string(BugKind k) { return k == BugKind::Syntactic ? "syntactic" : "logical"; }

int line_distance(int line, int start, int end) {
  if (line < start) return start - line;
  if (line > end) return line - end;
  return 0;
}

HintDB::HintDB(std::vector<BugRecord> bugs) : bugs_(std::move(bugs)), deliveries_(bugs_.size(), 0) {}

HintDB HintDB::load(std::istream& in) {
  toml_lite::Document doc;
  try {
    doc = toml_lite::parse(in);
  } catch (const ParseError& e) {
    throw LoadError(std::string("hint database: ") + e.what());
  }
  std::vector<BugRecord> bugs;
  std::set<std::string> seen;
  const auto it = doc.arrays.find("bug");
  if (it == doc.arrays.end()) return HintDB{};
  std::size_t idx = 0;
  for (const auto& t : it->second) {
    const std::string path = "bug[" + std::to_string(idx++) + "]";
    const auto fail = [&](const std::string& field, const std::string& msg) -> void {
      throw LoadError(path + "." + field + " (line " + std::to_string(t.line) + "): " + msg);
    };
    BugRecord b;
    try {
      const auto* id = t.find("bug_id");
      if (!id) fail("bug_id", "missing");
      b.bug_id = id->as_string();
      if (b.bug_id.empty()) fail("bug_id", "empty");
      if (!seen.insert(b.bug_id).second) fail("bug_id", "duplicate bug_id '" + b.bug_id + "'");

      const auto* lines = t.find("lines");
      if (!lines) fail("lines", "missing");
      const auto& arr = lines->as_array();
      if (arr.size() != 2) fail("lines", "expected [start, end]");
      b.line_start = static_cast<int>(arr[0].as_int());
      b.line_end = static_cast<int>(arr[1].as_int());
      if (b.line_start < 1) fail("lines", "lines are 1-based");
      if (b.line_start > b.line_end) fail("lines", "start > end");

      const auto* kind = t.find("kind");
      if (!kind) fail("kind", "missing");
      if (kind->as_string() == "syntactic") {
        b.kind = BugKind::Syntactic;
      } else if (kind->as_string() == "logical") {
        b.kind = BugKind::Logical;
      } else {
        fail("kind", "must be \"syntactic\" or \"logical\"");
      }

      const auto* hints = t.find("hints");
      if (!hints) fail("hints", "missing");
      for (const auto& h : hints->as_array()) {
        if (h.as_string().empty()) fail("hints", "empty hint text");
        b.hints.push_back(h.as_string());
      }
      if (b.hints.empty()) fail("hints", "empty hint list");
    } catch (const ParseError& e) {
      throw LoadError(path + ": " + e.what());
    }
    bugs.push_back(std::move(b));
  }
  return HintDB(std::move(bugs));
}

std::size_t HintDB::unresolved() const {
  return static_cast<std::size_t>(
      std::count_if(bugs_.begin(), bugs_.end(), [](const BugRecord& b) { return !b.resolved_at; }));
}

std::optional<std::size_t> HintDB::choose(std::optional<GazeFix> gaze, TimeMs t) const {
  const bool fresh = gaze && t - gaze->t <= kGazeStaleMs && t >= gaze->t;
  std::optional<std::size_t> best;
  int best_d = 0;
  for (std::size_t i = 0; i < bugs_.size(); ++i) {
    const auto& b = bugs_[i];
    if (b.resolved_at) continue;
    const int d = fresh ? line_distance(gaze->line, b.line_start, b.line_end) : 0;
    if (!best) {
      best = i;
      best_d = d;
      continue;
    }
    const auto& cur = bugs_[*best];
    const bool better = d < best_d || (d == best_d && (b.line_start < cur.line_start ||
                                                      (b.line_start == cur.line_start && b.bug_id < cur.bug_id)));
    if (better) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::optional<HintRecord> HintDB::select_hint(std::optional<GazeFix> gaze, TimeMs t, const TriggerEvent& trigger) {
  const auto idx = choose(gaze, t);
  if (!idx) return std::nullopt;
  const auto& b = bugs_[*idx];
  HintRecord h;
  h.prompt_id = trigger.prompt_id;
  h.bug_id = b.bug_id;
  h.text = b.hints[deliveries_[*idx] % b.hints.size()];
  h.source_label = source_label(trigger.source);
  h.t = t;
  ++deliveries_[*idx];
  return h;
}

void HintDB::mark_resolved(const std::string& bug_id, TimeMs t) {
  const auto it = std::find_if(bugs_.begin(), bugs_.end(), [&](const BugRecord& b) { return b.bug_id == bug_id; });
  if (it == bugs_.end()) throw ProtocolError("unknown bug '" + bug_id + "'");
  if (it->resolved_at) throw ProtocolError("bug '" + bug_id + "' already resolved");
  it->resolved_at = t;
}

}  // namespace rtms
