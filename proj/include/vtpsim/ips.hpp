#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "vtpsim/geometry.hpp"
#include "vtpsim/imaging.hpp"

namespace vtpsim {

/// Tuning for the frame-processing pipeline. The arc mask is an annulus of
/// radii [r_min, r_max] around the frame center, restricted to +-fov_theta/2
/// around the previously tracked target direction once one exists.
struct IpsConfig {
  double gg = 2.0;
  double gb = 2.0;
  double k_t = 150.0;
  double r_min = 26.0;   // pixels
  double r_max = 28.0;   // pixels
  double fov_theta = 2.3;  // radians, total aperture (two half-arcs)
  Kernel path_kernel = Kernel::square(3);
  Kernel marker_kernel = Kernel::disk(4);
  int frame_width = 160;
  int frame_height = 120;

  void validate() const {
    if (!(gg >= 1.0) || !(gb >= 1.0))
      throw std::invalid_argument("IpsConfig: gg and gb must be >= 1");
    if (!(r_min > 0.0) || !(r_min < r_max))
      throw std::invalid_argument("IpsConfig: need 0 < r_min < r_max");
    if (!(fov_theta > 0.0) || !(fov_theta <= kTwoPi))
      throw std::invalid_argument("IpsConfig: fov_theta must be in (0, 2*pi]");
    if (frame_width < 1 || frame_height < 1)
      throw std::invalid_argument("IpsConfig: frame dimensions must be >= 1");
  }
};

/// Image-center reference the pixel errors are measured from.
/// x is the row coordinate (H/2), y the column coordinate (W/2).
struct FrameCenter {
  double x = 0.0;
  double y = 0.0;
};

inline FrameCenter frame_center(int width, int height) {
  return {height / 2.0, width / 2.0};
}

/// Per-frame result handed to the planner. e_x/e_y are pixel errors from
/// the frame center (row/column axes). The two flags are never both set.
struct IpsOutput {
  double e_x = 0.0;
  double e_y = 0.0;
  bool flag_vtp = false;
  bool flag_marker = false;
  std::optional<double> theta;  // target direction, set with flag_vtp

  friend bool operator==(const IpsOutput&, const IpsOutput&) = default;
};

/// Carries the previous target direction between frames; empty before the
/// first detection, which makes the next search use the full annulus.
struct VtpTracker {
  std::optional<double> prev_theta;
};

/// Target fix in frame coordinates.
struct VtpFix {
  double x = 0.0;  // row
  double y = 0.0;  // col
  double theta = 0.0;
};

/// True iff (row, col) lies inside the annulus and, once a previous direction
/// exists, within half the angular aperture of it (shortest wrap).
inline bool arc_mask_contains(int row, int col, const FrameCenter& com,
                              const std::optional<double>& prev_theta,
                              const IpsConfig& cfg) {
  const double dx = row - com.x;
  const double dy = col - com.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 < cfg.r_min * cfg.r_min || d2 > cfg.r_max * cfg.r_max) return false;
  if (!prev_theta) return true;
  return angular_distance(std::atan2(dy, dx), *prev_theta) <= 0.5 * cfg.fov_theta;
}

namespace detail {

struct Centroid {
  long long count = 0;
  long long sum_row = 0;
  long long sum_col = 0;

  double row() const { return static_cast<double>(sum_row) / static_cast<double>(count); }
  double col() const { return static_cast<double>(sum_col) / static_cast<double>(count); }
};

// Centroid of set pixels passing the arc mask. Integer sums keep the result
// independent of traversal order.
inline Centroid masked_centroid(const BinaryFrame& frame, const FrameCenter& com,
                                const std::optional<double>& prev_theta,
                                const IpsConfig& cfg) {
  Centroid acc;
  const int r0 = std::max(0, static_cast<int>(std::floor(com.x - cfg.r_max)));
  const int r1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(com.x + cfg.r_max)));
  const int c0 = std::max(0, static_cast<int>(std::floor(com.y - cfg.r_max)));
  const int c1 = std::min(frame.width() - 1, static_cast<int>(std::ceil(com.y + cfg.r_max)));
  for (int row = r0; row <= r1; ++row)
    for (int col = c0; col <= c1; ++col)
      if (frame(row, col) && arc_mask_contains(row, col, com, prev_theta, cfg)) {
        ++acc.count;
        acc.sum_row += row;
        acc.sum_col += col;
      }
  return acc;
}

inline Centroid frame_centroid(const BinaryFrame& frame) {
  Centroid acc;
  for (int row = 0; row < frame.height(); ++row)
    for (int col = 0; col < frame.width(); ++col)
      if (frame(row, col)) {
        ++acc.count;
        acc.sum_row += row;
        acc.sum_col += col;
      }
  return acc;
}

}  // namespace detail

/// True iff at least one set pixel of the (already eroded) path frame lies
/// inside the arc mask.
inline bool detect_track(const BinaryFrame& path_frame, const FrameCenter& com,
                         const VtpTracker& tracker, const IpsConfig& cfg) {
  const int r0 = std::max(0, static_cast<int>(std::floor(com.x - cfg.r_max)));
  const int r1 = std::min(path_frame.height() - 1, static_cast<int>(std::ceil(com.x + cfg.r_max)));
  const int c0 = std::max(0, static_cast<int>(std::floor(com.y - cfg.r_max)));
  const int c1 = std::min(path_frame.width() - 1, static_cast<int>(std::ceil(com.y + cfg.r_max)));
  for (int row = r0; row <= r1; ++row)
    for (int col = c0; col <= c1; ++col)
      if (path_frame(row, col) && arc_mask_contains(row, col, com, tracker.prev_theta, cfg))
        return true;
  return false;
}

/// Centroid of the masked path pixels, plus its direction from the frame
/// center; stores that direction in the tracker for the next frame's mask.
/// Must only be called after detect_track succeeded.
inline VtpFix locate_vtp(const BinaryFrame& path_frame, const FrameCenter& com,
                         VtpTracker& tracker, const IpsConfig& cfg) {
  const auto acc = detail::masked_centroid(path_frame, com, tracker.prev_theta, cfg);
  if (acc.count == 0) throw std::logic_error("locate_vtp: arc mask selected no pixels");
  VtpFix fix;
  fix.x = acc.row();
  fix.y = acc.col();
  fix.theta = std::atan2(fix.y - com.y, fix.x - com.x);
  tracker.prev_theta = fix.theta;
  return fix;
}

/// True iff anything survives the additional circular erosion. Path strokes
/// thinner than the disk vanish; the filled end-marker keeps a core.
inline bool detect_marker(const BinaryFrame& path_frame, const IpsConfig& cfg) {
  return detail::frame_centroid(erode(path_frame, cfg.marker_kernel)).count > 0;
}

/// Centroid (row, col) of the pixels surviving the circular erosion.
/// Must only be called after detect_marker succeeded.
inline std::pair<double, double> locate_marker(const BinaryFrame& path_frame,
                                               const IpsConfig& cfg) {
  const auto acc = detail::frame_centroid(erode(path_frame, cfg.marker_kernel));
  if (acc.count == 0) throw std::logic_error("locate_marker: no surviving pixels");
  return {acc.row(), acc.col()};
}

/// Intermediate frames of one processing pass, for debug dumps.
struct IpsStages {
  std::optional<GrayFrame> gray;
  std::optional<BinaryFrame> binary;
  std::optional<BinaryFrame> path;
};

/// Diagnostic composite: path pixels white, the arc mask blue, masked path
/// pixels red, and the selected target (when any) marked green. mask_theta
/// is the direction the mask was built around, i.e. the tracker value from
/// before the pass.
inline PixelFrame mask_overlay(const BinaryFrame& path_frame, const FrameCenter& com,
                               const std::optional<double>& mask_theta, const IpsConfig& cfg,
                               const IpsOutput& out) {
  PixelFrame img(path_frame.width(), path_frame.height(), Rgb{0, 0, 0});
  for (int row = 0; row < path_frame.height(); ++row)
    for (int col = 0; col < path_frame.width(); ++col) {
      const bool on = path_frame(row, col) != 0;
      const bool masked = arc_mask_contains(row, col, com, mask_theta, cfg);
      if (on && masked)
        img(row, col) = {230, 40, 40};
      else if (on)
        img(row, col) = {255, 255, 255};
      else if (masked)
        img(row, col) = {40, 60, 160};
    }
  if (out.flag_vtp || out.flag_marker) {
    const int tr = static_cast<int>(std::lround(com.x + out.e_x));
    const int tc = static_cast<int>(std::lround(com.y + out.e_y));
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (img.in_bounds(tr + dr, tc + dc)) img(tr + dr, tc + dc) = {40, 220, 40};
  }
  return img;
}

/// Full per-frame pass: convert, threshold, erode, then either lock a path
/// target (priority) or fall back to the end-marker. With neither found the
/// output carries zero errors and both flags low.
inline IpsOutput process_frame(const PixelFrame& frame, VtpTracker& tracker,
                               const IpsConfig& cfg, IpsStages* stages = nullptr) {
  if (frame.width() != cfg.frame_width || frame.height() != cfg.frame_height)
    throw std::invalid_argument("process_frame: frame dimensions do not match config");
  const FrameCenter com = frame_center(frame.width(), frame.height());
  GrayFrame gray = channel_conv(frame, cfg.gg, cfg.gb);
  BinaryFrame binary = binarize(gray, cfg.k_t);
  BinaryFrame path = erode(binary, cfg.path_kernel);

  IpsOutput out;
  const auto ring = detail::masked_centroid(path, com, tracker.prev_theta, cfg);
  if (ring.count > 0) {
    out.flag_vtp = true;
    out.e_x = ring.row() - com.x;
    out.e_y = ring.col() - com.y;
    out.theta = std::atan2(out.e_y, out.e_x);
    tracker.prev_theta = out.theta;
  } else {
    const auto core = detail::frame_centroid(erode(path, cfg.marker_kernel));
    if (core.count > 0) {
      out.flag_marker = true;
      out.e_x = core.row() - com.x;
      out.e_y = core.col() - com.y;
    }
  }

  if (stages) {
    stages->gray = std::move(gray);
    stages->binary = std::move(binary);
    stages->path = std::move(path);
  }
  return out;
}

}  // namespace vtpsim
