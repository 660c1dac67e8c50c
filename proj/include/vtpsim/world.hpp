#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vtpsim/geometry.hpp"
#include "vtpsim/imaging.hpp"

namespace vtpsim {

struct LineSeg {
  Vec2 p0;
  Vec2 p1;
};

/// Circular arc point(t) = center + radius * (cos t, sin t), traversed from
/// a0 to a1 (a1 < a0 runs clockwise).
struct ArcSeg {
  Vec2 center;
  double radius = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
};

using Segment = std::variant<LineSeg, ArcSeg>;

inline Vec2 seg_start(const Segment& s) {
  if (const auto* l = std::get_if<LineSeg>(&s)) return l->p0;
  const auto& a = std::get<ArcSeg>(s);
  return a.center + a.radius * Vec2{std::cos(a.a0), std::sin(a.a0)};
}

inline Vec2 seg_end(const Segment& s) {
  if (const auto* l = std::get_if<LineSeg>(&s)) return l->p1;
  const auto& a = std::get<ArcSeg>(s);
  return a.center + a.radius * Vec2{std::cos(a.a1), std::sin(a.a1)};
}

inline double seg_length(const Segment& s) {
  if (const auto* l = std::get_if<LineSeg>(&s)) return distance(l->p0, l->p1);
  const auto& a = std::get<ArcSeg>(s);
  return a.radius * std::abs(a.a1 - a.a0);
}

/// Point on the segment at arc length u in [0, seg_length].
inline Vec2 seg_point_at(const Segment& s, double u) {
  if (const auto* l = std::get_if<LineSeg>(&s)) {
    const double len = distance(l->p0, l->p1);
    const double t = len > 0.0 ? u / len : 0.0;
    return l->p0 + t * (l->p1 - l->p0);
  }
  const auto& a = std::get<ArcSeg>(s);
  const double t = a.a0 + (a.a1 >= a.a0 ? 1.0 : -1.0) * u / a.radius;
  return a.center + a.radius * Vec2{std::cos(t), std::sin(t)};
}

/// Exact distance from a point to the segment centerline.
inline double seg_distance(const Segment& s, Vec2 p) {
  if (const auto* l = std::get_if<LineSeg>(&s)) {
    const Vec2 d = l->p1 - l->p0;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(p - l->p0, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, l->p0 + t * d);
  }
  const auto& a = std::get<ArcSeg>(s);
  const Vec2 v = p - a.center;
  const double phi = std::atan2(v.y, v.x);
  const double sweep = a.a1 - a.a0;
  const double rel = sweep >= 0.0 ? wrap_two_pi(phi - a.a0) : wrap_two_pi(a.a0 - phi);
  if (rel <= std::abs(sweep))
    return std::abs(norm(v) - a.radius);
  return std::min(distance(p, seg_start(s)), distance(p, seg_end(s)));
}

/// World description: the path centerline, its rendered width and colors,
/// the circular end-marker terminating it, and the mission start point.
struct TrackSpec {
  std::vector<Segment> segments;
  double path_width = 0.05;  // m
  Rgb path_color{255, 0, 0};
  Rgb background_color{255, 255, 255};
  Vec2 start_pose;
  Vec2 marker_center;
  double marker_diameter = 0.2;  // m

  double total_length() const {
    double len = 0.0;
    for (const auto& s : segments) len += seg_length(s);
    return len;
  }
};

class TrackParseError : public std::runtime_error {
 public:
  explicit TrackParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Minimum distance from a world point to the path centerline.
inline double path_distance(const TrackSpec& track, Vec2 p) {
  if (track.segments.empty())
    throw std::invalid_argument("path_distance: track has no segments");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : track.segments) best = std::min(best, seg_distance(s, p));
  return best;
}

namespace detail {

inline constexpr double kJoinTol = 1e-9;  // m

[[noreturn]] inline void parse_fail(int line_no, const std::string& msg) {
  throw TrackParseError("line " + std::to_string(line_no) + ": " + msg);
}

inline double parse_num(std::istringstream& iss, int line_no, const char* what) {
  double v = 0.0;
  if (!(iss >> v) || !std::isfinite(v)) parse_fail(line_no, std::string("expected number for ") + what);
  return v;
}

inline std::uint8_t parse_channel(std::istringstream& iss, int line_no) {
  long v = 0;
  if (!(iss >> v) || v < 0 || v > 255) parse_fail(line_no, "color channel must be an integer in [0, 255]");
  return static_cast<std::uint8_t>(v);
}

inline void expect_end(std::istringstream& iss, int line_no) {
  std::string extra;
  if (iss >> extra) parse_fail(line_no, "unexpected trailing token '" + extra + "'");
}

}  // namespace detail

/// Parse the line-based track format:
///   width W | color R G B | background R G B | start X Y
///   line X0 Y0 X1 Y1 | arc CX CY R A0 A1 | marker X Y DIAMETER
/// '#' starts a comment; angles are radians; units are meters. Consecutive
/// segments must join within 1e-9 m and the marker must sit on the final
/// endpoint.
inline TrackSpec parse_track(const std::string& text) {
  TrackSpec track;
  bool have_start = false;
  bool have_marker = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream iss(raw);
    std::string directive;
    if (!(iss >> directive)) continue;

    if (directive == "width") {
      track.path_width = detail::parse_num(iss, line_no, "width");
      if (!(track.path_width > 0.0)) detail::parse_fail(line_no, "width must be > 0");
      detail::expect_end(iss, line_no);
    } else if (directive == "color") {
      track.path_color = {detail::parse_channel(iss, line_no), detail::parse_channel(iss, line_no),
                          detail::parse_channel(iss, line_no)};
      detail::expect_end(iss, line_no);
    } else if (directive == "background") {
      track.background_color = {detail::parse_channel(iss, line_no),
                                detail::parse_channel(iss, line_no),
                                detail::parse_channel(iss, line_no)};
      detail::expect_end(iss, line_no);
    } else if (directive == "start") {
      track.start_pose.x = detail::parse_num(iss, line_no, "start x");
      track.start_pose.y = detail::parse_num(iss, line_no, "start y");
      have_start = true;
      detail::expect_end(iss, line_no);
    } else if (directive == "line") {
      LineSeg seg;
      seg.p0.x = detail::parse_num(iss, line_no, "x0");
      seg.p0.y = detail::parse_num(iss, line_no, "y0");
      seg.p1.x = detail::parse_num(iss, line_no, "x1");
      seg.p1.y = detail::parse_num(iss, line_no, "y1");
      detail::expect_end(iss, line_no);
      if (distance(seg.p0, seg.p1) <= 0.0) detail::parse_fail(line_no, "zero-length line segment");
      track.segments.emplace_back(seg);
    } else if (directive == "arc") {
      ArcSeg seg;
      seg.center.x = detail::parse_num(iss, line_no, "cx");
      seg.center.y = detail::parse_num(iss, line_no, "cy");
      seg.radius = detail::parse_num(iss, line_no, "radius");
      seg.a0 = detail::parse_num(iss, line_no, "a0");
      seg.a1 = detail::parse_num(iss, line_no, "a1");
      detail::expect_end(iss, line_no);
      if (!(seg.radius > 0.0)) detail::parse_fail(line_no, "arc radius must be > 0");
      if (seg.a0 == seg.a1) detail::parse_fail(line_no, "zero-sweep arc");
      if (std::abs(seg.a1 - seg.a0) > kTwoPi + 1e-9)
        detail::parse_fail(line_no, "arc sweep exceeds a full turn");
      track.segments.emplace_back(seg);
    } else if (directive == "marker") {
      track.marker_center.x = detail::parse_num(iss, line_no, "marker x");
      track.marker_center.y = detail::parse_num(iss, line_no, "marker y");
      track.marker_diameter = detail::parse_num(iss, line_no, "marker diameter");
      if (!(track.marker_diameter > 0.0)) detail::parse_fail(line_no, "marker diameter must be > 0");
      have_marker = true;
      detail::expect_end(iss, line_no);
    } else {
      detail::parse_fail(line_no, "unknown directive '" + directive + "'");
    }
  }

  if (track.segments.empty()) throw TrackParseError("no segments");
  if (!have_marker) throw TrackParseError("missing marker");
  for (std::size_t i = 1; i < track.segments.size(); ++i) {
    const Vec2 a = seg_end(track.segments[i - 1]);
    const Vec2 b = seg_start(track.segments[i]);
    if (distance(a, b) > detail::kJoinTol) {
      std::ostringstream msg;
      msg << "segments " << i << " and " << i + 1 << " do not connect: (" << a.x << ", " << a.y
          << ") vs (" << b.x << ", " << b.y << ")";
      throw TrackParseError(msg.str());
    }
  }
  const Vec2 end = seg_end(track.segments.back());
  if (distance(end, track.marker_center) > detail::kJoinTol) {
    std::ostringstream msg;
    msg << "marker (" << track.marker_center.x << ", " << track.marker_center.y
        << ") does not coincide with the path end (" << end.x << ", " << end.y << ")";
    throw TrackParseError(msg.str());
  }
  if (!have_start) track.start_pose = seg_start(track.segments.front());
  return track;
}

/// Convenience loader; parse errors carry the file's line numbers.
inline TrackSpec load_track(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open track file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_track(buf.str());
}

/// Downward camera intrinsics: `scale` px/m applies at ref_altitude; the
/// effective scale at other heights is scale * ref_altitude / altitude.
struct CameraModel {
  double scale = 100.0;  // px/m at ref_altitude
  int frame_width = 160;
  int frame_height = 120;
  double ref_altitude = 1.0;  // m

  void validate() const {
    if (!(scale > 0.0) || !(ref_altitude > 0.0))
      throw std::invalid_argument("CameraModel: scale and ref_altitude must be > 0");
    if (frame_width < 1 || frame_height < 1)
      throw std::invalid_argument("CameraModel: frame dimensions must be >= 1");
  }
};

/// Orthographic ground projection with the camera principal point at the
/// frame center and image rows aligned with world x (yaw is fixed). Pixels
/// are sampled at their centers; a pixel takes the path color when it falls
/// within half the path width of a centerline or inside the marker disk.
inline PixelFrame render_frame(const TrackSpec& track, Vec2 drone_xy, double altitude,
                               const CameraModel& cam) {
  if (!(altitude > 0.0)) throw std::invalid_argument("render_frame: altitude must be > 0");
  cam.validate();
  const double s = cam.scale * cam.ref_altitude / altitude;
  const double half_row = cam.frame_height / 2.0;
  const double half_col = cam.frame_width / 2.0;
  const double half_width = track.path_width / 2.0;
  const double marker_r = track.marker_diameter / 2.0;

  PixelFrame out(cam.frame_width, cam.frame_height, track.background_color);
  for (int row = 0; row < cam.frame_height; ++row) {
    for (int col = 0; col < cam.frame_width; ++col) {
      const Vec2 p{drone_xy.x + (row - half_row) / s, drone_xy.y + (col - half_col) / s};
      if (distance(p, track.marker_center) <= marker_r || path_distance(track, p) <= half_width)
        out(row, col) = track.path_color;
    }
  }
  return out;
}

}  // namespace vtpsim
