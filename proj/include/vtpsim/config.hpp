#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "vtpsim/sim.hpp"

namespace vtpsim {

/// Baseline configuration (no track loaded). Perception and timing constants
/// carry the standard deployment values; the planner gains default to values
/// calibrated against this vehicle model so the stock setup completes a
/// mission end to end.
inline SimConfig default_sim_config() {
  return SimConfig{};
}

namespace detail {

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

}  // namespace detail

inline constexpr std::array<const char*, 26> kOverrideKeys = {
    "ips.gg",
    "ips.gb",
    "ips.k_t",
    "ips.r_min",
    "ips.r_max",
    "ips.fov_theta",
    "ips.path_kernel_side",
    "ips.marker_kernel_radius",
    "planner.alpha",
    "planner.beta",
    "planner.z_h",
    "planner.centered_tol",
    "planner.apply_per",
    "vehicle.natural_frequency",
    "vehicle.damping_ratio",
    "vehicle.v_max",
    "mission.hover_tol",
    "mission.hover_rate_tol",
    "mission.ground_tol",
    "mission.lost_timeout",
    "camera.scale",
    "camera.frame_width",
    "camera.frame_height",
    "sim.t_pp",
    "sim.t_ips",
    "sim.max_time",
};

/// Apply one dotted-path override, e.g. ("planner.alpha", "5e-5").
/// Unknown keys and malformed values throw std::invalid_argument.
inline void apply_override(SimConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "ips.gg") cfg.ips.gg = parse_double(value);
  else if (key == "ips.gb") cfg.ips.gb = parse_double(value);
  else if (key == "ips.k_t") cfg.ips.k_t = parse_double(value);
  else if (key == "ips.r_min") cfg.ips.r_min = parse_double(value);
  else if (key == "ips.r_max") cfg.ips.r_max = parse_double(value);
  else if (key == "ips.fov_theta") cfg.ips.fov_theta = parse_double(value);
  else if (key == "ips.path_kernel_side") cfg.ips.path_kernel = Kernel::square(parse_int(value));
  else if (key == "ips.marker_kernel_radius") cfg.ips.marker_kernel = Kernel::disk(parse_int(value));
  else if (key == "planner.alpha") cfg.planner.alpha = parse_double(value);
  else if (key == "planner.beta") cfg.planner.beta = parse_double(value);
  else if (key == "planner.z_h") cfg.planner.z_h = parse_double(value);
  else if (key == "planner.centered_tol") cfg.planner.centered_tol = parse_double(value);
  else if (key == "planner.apply_per") {
    if (value == "pp_tick") cfg.planner.apply_per = PlannerConfig::ApplyPer::PpTick;
    else if (value == "ips_tick") cfg.planner.apply_per = PlannerConfig::ApplyPer::IpsTick;
    else throw std::invalid_argument("planner.apply_per must be pp_tick or ips_tick");
  } else if (key == "vehicle.natural_frequency") cfg.vehicle.natural_frequency = parse_double(value);
  else if (key == "vehicle.damping_ratio") cfg.vehicle.damping_ratio = parse_double(value);
  else if (key == "vehicle.v_max") cfg.vehicle.v_max = parse_double(value);
  else if (key == "mission.hover_tol") cfg.mission.hover_tol = parse_double(value);
  else if (key == "mission.hover_rate_tol") cfg.mission.hover_rate_tol = parse_double(value);
  else if (key == "mission.ground_tol") cfg.mission.ground_tol = parse_double(value);
  else if (key == "mission.lost_timeout") cfg.mission.lost_timeout = parse_double(value);
  else if (key == "camera.scale") cfg.camera.scale = parse_double(value);
  else if (key == "camera.frame_width") {
    cfg.camera.frame_width = parse_int(value);
    cfg.ips.frame_width = cfg.camera.frame_width;
  } else if (key == "camera.frame_height") {
    cfg.camera.frame_height = parse_int(value);
    cfg.ips.frame_height = cfg.camera.frame_height;
  } else if (key == "sim.t_pp") cfg.t_pp = parse_double(value);
  else if (key == "sim.t_ips") cfg.t_ips = parse_double(value);
  else if (key == "sim.max_time") cfg.max_time = parse_double(value);
  else throw std::invalid_argument("unknown config key: '" + key + "'");
}

/// Split "key=value" and apply it.
inline void apply_override_expr(SimConfig& cfg, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like key=value: '" + expr + "'");
  apply_override(cfg, expr.substr(0, eq), expr.substr(eq + 1));
}

}  // namespace vtpsim
