#include "rtms/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>

#include "rtms/error.hpp"

namespace rtms {

namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string_view> fields;
};

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
}

// Reads every data row, checking the header. The line buffer is kept alive in
// `storage` so the views stay valid.
std::vector<CsvRow> read_rows(std::istream& in, std::string_view header, std::size_t ncols,
                              std::vector<std::string>& storage) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header, expected '" + std::string(header) + "'");
  ++lineno;
  strip_cr(line);
  if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) {
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  }
  if (line != header) throw ParseError(1, "bad header '" + line + "', expected '" + std::string(header) + "'");

  std::vector<std::size_t> linenos;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    storage.push_back(std::move(line));
    linenos.push_back(lineno);
  }
  std::vector<CsvRow> rows;
  rows.reserve(storage.size());
  for (std::size_t i = 0; i < storage.size(); ++i) {
    CsvRow row{linenos[i], split(storage[i])};
    if (row.fields.size() != ncols) {
      throw ParseError(row.line, "expected " + std::to_string(ncols) + " fields, got " +
                                     std::to_string(row.fields.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TimeMs parse_time(const CsvRow& row, std::string_view f) {
  TimeMs v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) {
    throw ParseError(row.line, "bad timestamp '" + std::string(f) + "'");
  }
  if (v < 0) throw ParseError(row.line, "negative timestamp");
  return v;
}

double parse_double(const CsvRow& row, std::string_view f, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) {
    throw ParseError(row.line, std::string("bad ") + what + " '" + std::string(f) + "'");
  }
  return v;
}

int parse_int(const CsvRow& row, std::string_view f, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) {
    throw ParseError(row.line, std::string("bad ") + what + " '" + std::string(f) + "'");
  }
  return v;
}

bool parse_flag(const CsvRow& row, std::string_view f) {
  if (f == "1") return true;
  if (f == "0") return false;
  throw ParseError(row.line, "valid flag must be 0 or 1, got '" + std::string(f) + "'");
}

// Enforces the bounded reorder rule, then restores time order stably.
template <class Sample>
void reorder(std::vector<Sample>& samples, const std::vector<std::size_t>& lines) {
  TimeMs max_seen = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i].t + kReorderToleranceMs < max_seen) {
      throw OrderingError("line " + std::to_string(lines[i]) + ": t=" + std::to_string(samples[i].t) +
                          " arrives more than " + std::to_string(kReorderToleranceMs) +
                          " ms after t=" + std::to_string(max_seen));
    }
    max_seen = std::max(max_seen, samples[i].t);
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.t < b.t; });
}

bool usable_eye(double mm) { return std::isfinite(mm) && mm > 0.0; }

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

bool beat_value_in_range(BeatKind kind, double value) {
  if (!std::isfinite(value)) return false;
  return kind == BeatKind::HR ? (value > 20.0 && value < 250.0) : (value > 240.0 && value < 3000.0);
}

std::optional<double> pupil_diameter(const PupilSample& s) {
  if (!s.valid) return std::nullopt;
  const bool l = usable_eye(s.left_mm);
  const bool r = usable_eye(s.right_mm);
  if (l && r) return 0.5 * (s.left_mm + s.right_mm);
  if (l) return s.left_mm;
  if (r) return s.right_mm;
  return std::nullopt;
}

std::vector<PupilSample> parse_pupil_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_rows(in, "t_ms,left_mm,right_mm,valid", 4, storage);
  std::vector<PupilSample> out;
  std::vector<std::size_t> lines;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    PupilSample s;
    s.t = parse_time(row, row.fields[0]);
    s.left_mm = parse_double(row, row.fields[1], "left_mm");
    s.right_mm = parse_double(row, row.fields[2], "right_mm");
    s.valid = parse_flag(row, row.fields[3]);
    // A sample flagged valid with no usable eye is demoted rather than rejected.
    if (s.valid && !usable_eye(s.left_mm) && !usable_eye(s.right_mm)) s.valid = false;
    out.push_back(s);
    lines.push_back(row.line);
  }
  reorder(out, lines);
  return out;
}

std::vector<BeatSample> parse_beats_csv(std::istream& in, BeatKind kind) {
  std::vector<std::string> storage;
  const auto rows = read_rows(in, "t_ms,value", 2, storage);
  std::vector<BeatSample> out;
  std::vector<std::size_t> lines;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    BeatSample s;
    s.t = parse_time(row, row.fields[0]);
    s.kind = kind;
    s.value = parse_double(row, row.fields[1], "value");
    s.in_range = beat_value_in_range(kind, s.value);
    out.push_back(s);
    lines.push_back(row.line);
  }
  reorder(out, lines);
  return out;
}

std::vector<GazeSample> parse_gaze_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_rows(in, "t_ms,line,valid", 3, storage);
  std::vector<GazeSample> out;
  std::vector<std::size_t> lines;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    GazeSample s;
    s.t = parse_time(row, row.fields[0]);
    s.line = parse_int(row, row.fields[1], "line");
    s.valid = parse_flag(row, row.fields[2]);
    if (s.valid && s.line < 1) throw ParseError(row.line, "gaze line must be >= 1 for a valid sample");
    out.push_back(s);
    lines.push_back(row.line);
  }
  reorder(out, lines);
  return out;
}

std::string to_string(ClientEventKind kind) {
  switch (kind) {
    case ClientEventKind::Accept: return "accept";
    case ClientEventKind::Decline: return "decline";
    case ClientEventKind::Help: return "help";
    case ClientEventKind::Resolve: return "resolve";
    case ClientEventKind::Dismiss: return "dismiss";
    case ClientEventKind::Bye: return "bye";
  }
  return "?";
}

std::optional<ClientEventKind> client_event_kind_from(const std::string& s) {
  for (auto k : {ClientEventKind::Accept, ClientEventKind::Decline, ClientEventKind::Help,
                 ClientEventKind::Resolve, ClientEventKind::Dismiss, ClientEventKind::Bye}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::vector<ClientEvent> parse_client_events_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_rows(in, "t_ms,event,value", 3, storage);
  std::vector<ClientEvent> out;
  std::vector<std::size_t> lines;
  for (const auto& row : rows) {
    ClientEvent e;
    e.t = parse_time(row, row.fields[0]);
    const auto kind = client_event_kind_from(std::string(row.fields[1]));
    if (!kind) throw ParseError(row.line, "unknown client event '" + std::string(row.fields[1]) + "'");
    e.kind = *kind;
    e.value = std::string(row.fields[2]);
    if (e.kind == ClientEventKind::Help && e.value != "0" && e.value != "1") {
      throw ParseError(row.line, "help value must be 0 or 1");
    }
    if (e.kind == ClientEventKind::Resolve && e.value.empty()) {
      throw ParseError(row.line, "resolve requires a bug id");
    }
    out.push_back(std::move(e));
    lines.push_back(row.line);
  }
  reorder(out, lines);
  return out;
}

void write_pupil_csv(std::ostream& out, const std::vector<PupilSample>& samples) {
  out << "t_ms,left_mm,right_mm,valid\n";
  for (const auto& s : samples) {
    out << s.t << ',' << fmt_double(s.left_mm) << ',' << fmt_double(s.right_mm) << ','
        << (s.valid ? 1 : 0) << '\n';
  }
}

void write_beats_csv(std::ostream& out, const std::vector<BeatSample>& samples) {
  out << "t_ms,value\n";
  for (const auto& s : samples) out << s.t << ',' << fmt_double(s.value) << '\n';
}

void write_gaze_csv(std::ostream& out, const std::vector<GazeSample>& samples) {
  out << "t_ms,line,valid\n";
  for (const auto& s : samples) out << s.t << ',' << s.line << ',' << (s.valid ? 1 : 0) << '\n';
}

void write_client_events_csv(std::ostream& out, const std::vector<ClientEvent>& events) {
  out << "t_ms,event,value\n";
  for (const auto& e : events) out << e.t << ',' << to_string(e.kind) << ',' << e.value << '\n';
}

std::vector<SensorEvent> merge_streams(const std::vector<std::vector<SensorEvent>>& streams) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& s = streams[i];
    for (std::size_t j = 1; j < s.size(); ++j) {
      if (s[j].t < s[j - 1].t) {
        throw OrderingError("stream " + std::to_string(i) + " is not time-ordered at position " +
                            std::to_string(j));
      }
    }
    total += s.size();
  }
  std::vector<SensorEvent> out;
  out.reserve(total);
  for (const auto& s : streams) out.insert(out.end(), s.begin(), s.end());
  // Concatenation is in stream order, so a stable sort on (t, rank) leaves
  // remaining ties in stream-then-position order.
  std::stable_sort(out.begin(), out.end(), [](const SensorEvent& a, const SensorEvent& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.rank() < b.rank();
  });
  return out;
}

}  // namespace rtms
