#include <doctest.h>

#include <sstream>

#include "rtms/error.hpp"
#include "rtms/signals.hpp"

using namespace rtms;

TEST_CASE("pupil csv single row") {
  std::istringstream in("t_ms,left_mm,right_mm,valid\n0,3.50,3.52,1\n");
  const auto s = parse_pupil_csv(in);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == PupilSample{0, 3.50, 3.52, true});
}

TEST_CASE("pupil csv header only is empty") {
  std::istringstream in("t_ms,left_mm,right_mm,valid\n");
  CHECK(parse_pupil_csv(in).empty());
}

TEST_CASE("pupil csv equal timestamps keep file order") {
  std::istringstream in("t_ms,left_mm,right_mm,valid\n0,3.0,3.0,1\n4,3.1,3.1,1\n4,3.2,3.2,1\n");
  const auto s = parse_pupil_csv(in);
  REQUIRE(s.size() == 3);
  CHECK(s[1].left_mm == 3.1);
  CHECK(s[2].left_mm == 3.2);
}

TEST_CASE("pupil csv accepts CRLF") {
  std::istringstream in("t_ms,left_mm,right_mm,valid\r\n0,3.5,3.5,1\r\n");
  CHECK(parse_pupil_csv(in).size() == 1);
}

TEST_CASE("late rows within tolerance are re-sorted, later ones rejected") {
  std::istringstream ok("t_ms,left_mm,right_mm,valid\n100,3.0,3.0,1\n60,3.1,3.1,1\n");
  const auto s = parse_pupil_csv(ok);
  CHECK(s[0].t == 60);
  CHECK(s[1].t == 100);
  std::istringstream bad("t_ms,left_mm,right_mm,valid\n100,3.0,3.0,1\n40,3.1,3.1,1\n");
  CHECK_THROWS_AS(parse_pupil_csv(bad), OrderingError);
}

TEST_CASE("malformed pupil rows report their line") {
  std::istringstream in("t_ms,left_mm,right_mm,valid\n0,3.5,3.5,1\n4,abc,3.5,1\n");
  try {
    parse_pupil_csv(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream hdr("t,left,right,valid\n");
  CHECK_THROWS_AS(parse_pupil_csv(hdr), ParseError);
}

TEST_CASE("beat csv kinds and range") {
  std::istringstream hr("t_ms,value\n0,70.0\n");
  const auto h = parse_beats_csv(hr, BeatKind::HR);
  CHECK(h[0] == BeatSample{0, BeatKind::HR, 70.0, true});
  std::istringstream rr("t_ms,value\n0,857\n1000,5000\n");
  const auto r = parse_beats_csv(rr, BeatKind::RR);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == BeatSample{0, BeatKind::RR, 857.0, true});
  CHECK_FALSE(r[1].in_range);
}

TEST_CASE("gaze csv") {
  std::istringstream in("t_ms,line,valid\n100,42,1\n150,43,1\n");
  const auto g = parse_gaze_csv(in);
  REQUIRE(g.size() == 2);
  CHECK(g[0] == GazeSample{100, 42, true});
  CHECK(g[1].line == 43);
  std::istringstream bad("t_ms,line,valid\n100,0,1\n");
  CHECK_THROWS_AS(parse_gaze_csv(bad), ParseError);
}

TEST_CASE("client events csv") {
  std::istringstream in("t_ms,event,value\n10,accept,1\n20,help,0\n30,resolve,B1\n");
  const auto e = parse_client_events_csv(in);
  REQUIRE(e.size() == 3);
  CHECK(e[0].kind == ClientEventKind::Accept);
  CHECK(e[1].value == "0");
  CHECK(e[2] == ClientEvent{30, ClientEventKind::Resolve, "B1"});
  std::istringstream bad("t_ms,event,value\n10,shout,1\n");
  CHECK_THROWS_AS(parse_client_events_csv(bad), ParseError);
}

TEST_CASE("csv round trips") {
  const std::vector<PupilSample> p{{0, 3.5, 3.25, true}, {4, 0.0, 0.0, false}, {8, 3.125, 3.0625, true}};
  std::stringstream ps;
  write_pupil_csv(ps, p);
  CHECK(parse_pupil_csv(ps) == p);
  const std::vector<BeatSample> b{{0, BeatKind::HR, 70.5, true}, {1000, BeatKind::HR, 71.25, true}};
  std::stringstream bs;
  write_beats_csv(bs, b);
  CHECK(parse_beats_csv(bs, BeatKind::HR) == b);
  const std::vector<GazeSample> g{{0, 3, true}, {50, 4, true}};
  std::stringstream gs;
  write_gaze_csv(gs, g);
  CHECK(parse_gaze_csv(gs) == g);
  const std::vector<ClientEvent> c{{5, ClientEventKind::Decline, "1"}, {9, ClientEventKind::Resolve, "B2"}};
  std::stringstream cs;
  write_client_events_csv(cs, c);
  CHECK(parse_client_events_csv(cs) == c);
}

TEST_CASE("pupil diameter uses the usable eyes") {
  CHECK(*pupil_diameter({0, 3.0, 4.0, true}) == 3.5);
  CHECK_FALSE(pupil_diameter({0, 3.0, 4.0, false}));
}

TEST_CASE("merge interleaves and breaks ties by payload rank") {
  CHECK(merge_streams({{}, {}}).empty());
  const std::vector<PupilSample> p{{0, 3, 3, true}, {10, 3, 3, true}};
  const std::vector<BeatSample> b{{5, BeatKind::HR, 70, true}};
  const auto m = merge_streams({to_events(p), to_events(b)});
  REQUIRE(m.size() == 3);
  CHECK(m[0].t == 0);
  CHECK(m[1].rank() == 1);
  CHECK(m[2].t == 10);

  const std::vector<GazeSample> g{{5, 1, true}};
  const std::vector<PupilSample> p5{{5, 3, 3, true}};
  const auto tie = merge_streams({to_events(g), to_events(p5)});
  CHECK(tie[0].rank() == 0);
  CHECK(tie[1].rank() == 2);
}

TEST_CASE("merge is a stable total order") {
  std::vector<SensorEvent> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back({i * 3, PupilSample{i * 3, 3.0 + i, 3.0, true}});
    b.push_back({i * 2, PupilSample{i * 2, 100.0 + i, 3.0, true}});
  }
  const auto m = merge_streams({a, b});
  REQUIRE(m.size() == 100);
  for (std::size_t i = 1; i < m.size(); ++i) {
    REQUIRE(m[i - 1].t <= m[i].t);
    if (m[i - 1].t == m[i].t) {
      // first stream wins ties of equal rank
      CHECK(std::get<PupilSample>(m[i - 1].payload).left_mm < 100.0);
    }
  }
  CHECK(merge_streams({a, b}) == m);
}

TEST_CASE("merge rejects unordered streams") {
  std::vector<SensorEvent> a{{10, PupilSample{10, 3, 3, true}}, {0, PupilSample{0, 3, 3, true}}};
  CHECK_THROWS_AS(merge_streams({a}), OrderingError);
}
