#pragma once

#include <cmath>
#include <stdexcept>

#include "vtpsim/planner.hpp"

namespace vtpsim {

struct DroneState {
  double x = 0.0, y = 0.0, z = 0.0;     // m, world frame
  double vx = 0.0, vy = 0.0, vz = 0.0;  // m/s

  friend bool operator==(const DroneState&, const DroneState&) = default;
};

/// Per-axis second-order tracking model standing in for the inner control
/// loops: x'' = wn^2 (x_ref - x) - 2 zeta wn x'.
struct VehicleParams {
  double natural_frequency = 6.0;  // rad/s
  double damping_ratio = 0.9;
  double v_max = 1.5;  // m/s, horizontal speed limit
  double dt = 5e-3;    // s, integration step (the planner period)

  void validate() const {
    if (!(natural_frequency > 0.0) || !(damping_ratio > 0.0) || !(v_max > 0.0) || !(dt > 0.0))
      throw std::invalid_argument("VehicleParams: all parameters must be > 0");
    if (!(dt * natural_frequency < 0.5))
      throw std::invalid_argument("VehicleParams: dt * natural_frequency must be < 0.5");
  }
};

/// Semi-implicit step toward the waypoint; horizontal speed is clamped to
/// v_max preserving direction. Heading is not modeled.
inline DroneState step_vehicle(const DroneState& s, const Waypoint& wp,
                               const VehicleParams& p) {
  p.validate();
  const double wn2 = p.natural_frequency * p.natural_frequency;
  const double damp = 2.0 * p.damping_ratio * p.natural_frequency;

  DroneState n = s;
  n.vx += p.dt * (wn2 * (wp.x - s.x) - damp * s.vx);
  n.vy += p.dt * (wn2 * (wp.y - s.y) - damp * s.vy);
  n.vz += p.dt * (wn2 * (wp.z - s.z) - damp * s.vz);

  const double h = std::hypot(n.vx, n.vy);
  if (h > p.v_max) {
    const double k = p.v_max / h;
    n.vx *= k;
    n.vy *= k;
  }

  n.x += p.dt * n.vx;
  n.y += p.dt * n.vy;
  n.z += p.dt * n.vz;
  if (n.z < 0.0) {
    n.z = 0.0;
    n.vz = 0.0;
  }
  return n;
}

}  // namespace vtpsim
