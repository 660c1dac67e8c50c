#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vtpsim/ips.hpp"
#include "vtpsim/world.hpp"

using namespace vtpsim;

namespace {

const char* kMiniTrack =
    "width 0.05\n"
    "line 0 0 0 2\n"
    "marker 0 2 0.2\n";

TrackSpec random_track(std::mt19937& rng) {
  std::uniform_real_distribution<double> len(0.3, 1.5);
  std::uniform_real_distribution<double> turn(-1.2, 1.2);
  std::uniform_real_distribution<double> radius(0.3, 0.8);
  std::uniform_int_distribution<int> nseg(2, 6);
  std::bernoulli_distribution is_arc(0.5);

  TrackSpec track;
  Vec2 pos{0, 0};
  double heading = turn(rng);
  const int n = nseg(rng);
  for (int i = 0; i < n; ++i) {
    if (is_arc(rng)) {
      const double r = radius(rng);
      const double sweep = turn(rng) + (turn(rng) >= 0 ? 0.4 : -0.4);
      // center perpendicular to the heading, left for positive sweep
      const double side = sweep >= 0 ? 1.0 : -1.0;
      const Vec2 center{pos.x - side * r * std::sin(heading),
                        pos.y + side * r * std::cos(heading)};
      const double a0 = std::atan2(pos.y - center.y, pos.x - center.x);
      ArcSeg arc{center, r, a0, a0 + sweep};
      track.segments.emplace_back(arc);
      pos = seg_end(track.segments.back());
      heading += sweep;
    } else {
      const double l = len(rng);
      const Vec2 end{pos.x + l * std::cos(heading), pos.y + l * std::sin(heading)};
      track.segments.emplace_back(LineSeg{pos, end});
      pos = end;
    }
  }
  track.marker_center = pos;
  track.start_pose = seg_start(track.segments.front());
  return track;
}

}  // namespace

TEST_CASE("parse_track: single segment with marker") {
  const TrackSpec t = parse_track(kMiniTrack);
  REQUIRE(t.segments.size() == 1);
  CHECK(t.total_length() == Catch::Approx(2.0));
  CHECK(t.path_width == 0.05);
  CHECK(t.marker_center == Vec2{0, 2});
  CHECK(t.start_pose == Vec2{0, 0});  // defaults to the first endpoint
}

TEST_CASE("parse_track: directives, comments and whitespace") {
  const TrackSpec t = parse_track(
      "# a comment line\n"
      "width 0.08\n"
      "color 200 10 10   # trailing comment\n"
      "background 0 0 0\n"
      "start 0.5 0.5\n"
      "line 0 0 1 0\n"
      "arc 1 0.5 0.5 -1.5707963267948966 0\n"
      "marker 1.5 0.5 0.3\n");
  CHECK(t.segments.size() == 2);
  CHECK(t.path_width == 0.08);
  CHECK(t.path_color == Rgb{200, 10, 10});
  CHECK(t.background_color == Rgb{0, 0, 0});
  CHECK(t.start_pose == Vec2{0.5, 0.5});
  CHECK(t.marker_diameter == 0.3);
}

TEST_CASE("parse_track: errors carry line numbers and name the joint") {
  using Catch::Matchers::ContainsSubstring;

  CHECK_THROWS_WITH(parse_track(""), ContainsSubstring("no segments"));
  CHECK_THROWS_WITH(parse_track("line 0 0 1 0\n"), ContainsSubstring("missing marker"));
  CHECK_THROWS_WITH(parse_track("line 0 0 zebra 0\nmarker 1 0 0.2\n"),
                    ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(parse_track("wiggle 1 2\n"), ContainsSubstring("unknown directive"));
  CHECK_THROWS_WITH(
      parse_track("line 0 0 1 0\nline 1.5 0 2 0\nmarker 2 0 0.2\n"),
      ContainsSubstring("segments 1 and 2"));
  CHECK_THROWS_WITH(parse_track("line 0 0 1 0\nmarker 5 5 0.2\n"),
                    ContainsSubstring("marker"));
  CHECK_THROWS_WITH(parse_track("line 0 0 1 0\nmarker 1 0 0.2\nline 1 0 1 0\n"),
                    ContainsSubstring("zero-length"));
}

TEST_CASE("path_distance: exact cases") {
  const TrackSpec t = parse_track(kMiniTrack);
  CHECK(path_distance(t, {0, 1}) == 0.0);
  CHECK(path_distance(t, {0.1, 1.0}) == Catch::Approx(0.1));
  // beyond the far endpoint: distance to the endpoint itself
  CHECK(path_distance(t, {0.3, 2.4}) == Catch::Approx(std::hypot(0.3, 0.4)));
}

TEST_CASE("path_distance: arcs measured radially inside the sweep") {
  TrackSpec t;
  t.segments.emplace_back(ArcSeg{{0, 0}, 1.0, 0.0, kPi / 2});
  t.marker_center = seg_end(t.segments.back());
  CHECK(path_distance(t, {std::cos(0.5) * 1.3, std::sin(0.5) * 1.3}) == Catch::Approx(0.3));
  CHECK(path_distance(t, {std::cos(0.5) * 0.6, std::sin(0.5) * 0.6}) == Catch::Approx(0.4));
  // outside the sweep: nearest endpoint wins
  CHECK(path_distance(t, {0, -0.5}) == Catch::Approx(std::hypot(1.0, 0.5)));
}

TEST_CASE("path_distance agrees with dense sampling on random tracks") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coord(-2.5, 2.5);
  for (int i = 0; i < 12; ++i) {
    const TrackSpec t = random_track(rng);
    for (int j = 0; j < 20; ++j) {
      const Vec2 p{coord(rng), coord(rng)};
      const double fast = path_distance(t, p);
      const double dense = oracle::dense_path_distance(t, p);
      CHECK(fast <= dense + 1e-12);
      CHECK(std::abs(fast - dense) <= 1e-3);
    }
  }
}

TEST_CASE("path_distance is 1-Lipschitz") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> delta(-0.3, 0.3);
  const TrackSpec t = random_track(rng);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{coord(rng), coord(rng)};
    const Vec2 q{p.x + delta(rng), p.y + delta(rng)};
    CHECK(std::abs(path_distance(t, p) - path_distance(t, q)) <= distance(p, q) + 1e-12);
  }
}

TEST_CASE("render_frame: stripe over a vertical segment is centered and sized") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  // drone over (0, 1): segment runs along world y, so it spans image columns
  const PixelFrame f = render_frame(t, {0, 1}, 1.0, cam);
  // stripe half-width 0.025 m * 100 px/m -> rows 58..62 red
  int first = -1, last = -1;
  for (int row = 0; row < f.height(); ++row)
    if (f(row, 40) == t.path_color) {
      if (first < 0) first = row;
      last = row;
    }
  CHECK(first == 58);
  CHECK(last == 62);
  CHECK(f(57, 40) == t.background_color);
}

TEST_CASE("render_frame: far from all geometry gives uniform background") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  const PixelFrame f = render_frame(t, {50, 50}, 1.0, cam);
  for (const Rgb& px : f.cells()) CHECK(px == t.background_color);
}

TEST_CASE("render_frame: marker renders as centered disk of the right radius") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  const PixelFrame f = render_frame(t, t.marker_center, 1.0, cam);
  // marker radius 0.1 m -> 10 px; boundary pixels may fall either way
  CHECK(f(60, 80) == t.path_color);
  CHECK(f(60 + 9, 80) == t.path_color);
  CHECK(f(60 + 11, 80) == t.background_color);
  CHECK(f(60, 80 + 9) == t.path_color);
  CHECK(f(60, 80 + 11) == t.background_color);
  int reds = 0;  // beyond the path end, only the disk colors this half-row
  for (int col = 80; col < 160; ++col)
    if (f(60, col) == t.path_color) ++reds;
  CHECK(reds >= 10);
  CHECK(reds <= 11);
}

TEST_CASE("render_frame: altitude scales the projection") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  // twice the altitude halves the effective scale: stripe shrinks to ~3 px
  const PixelFrame f = render_frame(t, {0, 1}, 2.0, cam);
  int count = 0;
  for (int row = 0; row < f.height(); ++row)
    if (f(row, 80) == t.path_color) ++count;
  CHECK(count == 3);
  CHECK_THROWS_AS(render_frame(t, {0, 1}, 0.0, cam), std::invalid_argument);
}

TEST_CASE("render_frame: determinism and translation consistency") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  const PixelFrame a = render_frame(t, {0.1, 1}, 1.0, cam);
  const PixelFrame b = render_frame(t, {0.1, 1}, 1.0, cam);
  CHECK(a == b);

  // shifting the drone +0.1 m in x moves the stripe -10 rows
  auto stripe_first_row = [&](const PixelFrame& f) {
    for (int row = 0; row < f.height(); ++row)
      if (f(row, 80) == t.path_color) return row;
    return -1;
  };
  const PixelFrame c = render_frame(t, {0.2, 1}, 1.0, cam);
  const int ra = stripe_first_row(a);
  const int rc = stripe_first_row(c);
  REQUIRE(ra >= 0);
  REQUIRE(rc >= 0);
  CHECK(std::abs((ra - rc) - 10) <= 1);
}

TEST_CASE("rendered frames close the loop with the frame processor") {
  const TrackSpec t = parse_track(kMiniTrack);
  const CameraModel cam;
  IpsConfig ips;
  VtpTracker tracker;
  tracker.prev_theta = kPi / 2;  // looking along the segment (+world y)
  // hovering over the middle of the segment: the stripe crosses the ring
  const PixelFrame f = render_frame(t, {0, 1}, 1.0, cam);
  const IpsOutput out = process_frame(f, tracker, ips);
  CHECK(out.flag_vtp);
  const double r = std::hypot(out.e_x, out.e_y);
  CHECK(r >= ips.r_min - 1.0);
  CHECK(r <= ips.r_max + 1.0);
}

TEST_CASE("camera validation") {
  CameraModel cam;
  cam.scale = 0.0;
  CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
}
