#pragma once

#include <cmath>
#include <stdexcept>

#include "vtpsim/ips.hpp"

namespace vtpsim {

/// World-frame position reference handed to the vehicle.
struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct PlannerConfig {
  /// Whether the error integration runs every planner tick (consuming the
  /// zero-order-held frame output) or once per fresh frame.
  enum class ApplyPer { PpTick, IpsTick };

  double alpha = 1.2e-4;      // m/pixel, following gain
  double beta = 8e-5;         // m/pixel, marker-centering gain
  double z_h = 1.0;           // m, flight altitude
  double t_pp = 5e-3;         // s, planner period
  double centered_tol = 1.0;  // pixels; 0 recovers the exact-zero test
  ApplyPer apply_per = ApplyPer::PpTick;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("PlannerConfig: alpha and beta must be > 0");
    if (!(z_h > 0.0) || !(t_pp > 0.0))
      throw std::invalid_argument("PlannerConfig: z_h and t_pp must be > 0");
    if (!(centered_tol >= 0.0))
      throw std::invalid_argument("PlannerConfig: centered_tol must be >= 0");
  }
};

/// One waypoint update from the held frame output. Pixel errors map onto
/// world axes one-to-one; heading is never commanded, so the camera frame
/// stays aligned with the world frame.
///
/// Path branch: advance by alpha * e at flight altitude. Marker branch:
/// within the centering tolerance hold position and drop the reference to
/// the ground, otherwise advance by beta * e. With neither flag the
/// previous waypoint is held; mission logic owns the consequence.
inline Waypoint plan_step(const Waypoint& prev, const IpsOutput& ips,
                          const PlannerConfig& cfg) {
  if (!std::isfinite(prev.x) || !std::isfinite(prev.y) || !std::isfinite(prev.z))
    throw std::invalid_argument("plan_step: waypoint must be finite");
  Waypoint next = prev;
  if (ips.flag_vtp) {
    next.x += cfg.alpha * ips.e_x;
    next.y += cfg.alpha * ips.e_y;
    next.z = cfg.z_h;
  } else if (ips.flag_marker) {
    if (std::abs(ips.e_x) <= cfg.centered_tol && std::abs(ips.e_y) <= cfg.centered_tol) {
      next.z = 0.0;
    } else {
      next.x += cfg.beta * ips.e_x;
      next.y += cfg.beta * ips.e_y;
      next.z = cfg.z_h;
    }
  }
  return next;
}

/// Waypoint-advance speed when the pixel error is pinned at the middle of
/// the arc-mask annulus: (alpha / t_pp) * (r_min + r_max) / 2.
inline double predicted_speed(const PlannerConfig& cfg, const IpsConfig& ips_cfg) {
  return cfg.alpha / cfg.t_pp * 0.5 * (ips_cfg.r_min + ips_cfg.r_max);
}

}  // namespace vtpsim
