#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "vtpsim/image_io.hpp"
#include "vtpsim/ips.hpp"
#include "vtpsim/mission.hpp"
#include "vtpsim/planner.hpp"
#include "vtpsim/vehicle.hpp"
#include "vtpsim/world.hpp"

namespace vtpsim {

/// Thresholds turning raw vehicle state into mission predicates.
struct MissionConfig {
  double hover_tol = 0.02;       // m, |z - z_h| at hover
  double hover_rate_tol = 0.05;  // m/s, |vz| at hover
  double ground_tol = 0.01;      // m, touchdown altitude
  double lost_timeout = 5.0;     // s without any detection flag

  void validate() const {
    if (!(hover_tol >= 0.0) || !(hover_rate_tol >= 0.0) || !(ground_tol >= 0.0))
      throw std::invalid_argument("MissionConfig: tolerances must be >= 0");
    if (!(lost_timeout > 0.0))
      throw std::invalid_argument("MissionConfig: lost_timeout must be > 0");
  }
};

/// Full closed-loop configuration. t_ips must be an integer multiple of
/// t_pp; the planner and vehicle periods are driven from t_pp. Everything
/// is deterministic: equal configs give bit-identical runs.
struct SimConfig {
  IpsConfig ips;
  PlannerConfig planner;
  VehicleParams vehicle;
  MissionConfig mission;
  CameraModel camera;
  TrackSpec track;
  double t_pp = 5e-3;   // s, planner/vehicle tick
  double t_ips = 0.2;   // s, camera refresh
  double max_time = 120.0;  // s

  int ips_ticks() const {
    const double ratio = t_ips / t_pp;
    return static_cast<int>(std::lround(ratio));
  }

  void validate() const {
    if (!(t_pp > 0.0) || !(t_ips > 0.0) || !(max_time > 0.0))
      throw std::invalid_argument("SimConfig: periods and max_time must be > 0");
    const double ratio = t_ips / t_pp;
    if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::lround(ratio)) > 1e-9)
      throw std::invalid_argument("SimConfig: t_ips must be an integer multiple of t_pp");
    ips.validate();
    planner.validate();
    mission.validate();
    camera.validate();
    if (ips.frame_width != camera.frame_width || ips.frame_height != camera.frame_height)
      throw std::invalid_argument("SimConfig: ips and camera frame dimensions differ");
    if (track.segments.empty())
      throw std::invalid_argument("SimConfig: track has no segments");
    VehicleParams v = vehicle;
    v.dt = t_pp;
    v.validate();
  }
};

struct LogRow {
  double t = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  double vx = 0.0, vy = 0.0, vz = 0.0;
  double v_d = 0.0;  // horizontal speed norm
  double wp_x = 0.0, wp_y = 0.0, wp_z = 0.0;
  double e_x = 0.0, e_y = 0.0;
  bool flag_vtp = false;
  bool flag_marker = false;
  MissionPhase state = MissionPhase::TakeOff;
};

struct TrajectoryLog {
  std::vector<LogRow> rows;
};

enum class Outcome { Done, Failed, Timeout };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Done: return "Done";
    case Outcome::Failed: return "Failed";
    case Outcome::Timeout: return "Timeout";
  }
  return "?";
}

struct RunMetrics {
  Outcome outcome = Outcome::Timeout;
  double mission_time = 0.0;      // s, start to terminal event
  double mean_path_error = 0.0;   // m, over the Following phase
  double max_path_error = 0.0;    // m, over the Following phase
  double landing_offset = 0.0;    // m, final ground position to marker center
};

struct RunResult {
  TrajectoryLog log;
  RunMetrics metrics;
};

struct RunOptions {
  /// When non-empty, every processed frame is dumped into this directory as
  /// PPM/PGM stage images keyed by frame index.
  std::string frame_dump_dir;
};

namespace detail {

// The projection degenerates as altitude goes to zero; frames rendered on
// the ground use this floor instead.
inline constexpr double kMinRenderAltitude = 0.05;  // m

inline void dump_stages(const std::string& dir, long frame_index, const PixelFrame& rgb,
                        const IpsStages& stages, const PixelFrame& overlay) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  char name[64];
  std::snprintf(name, sizeof(name), "frame_%06ld", frame_index);
  const std::string base = (fs::path(dir) / name).string();
  write_image_file(rgb, base + "_rgb.ppm");
  if (stages.gray) write_image_file(*stages.gray, base + "_gray.pgm");
  if (stages.binary) write_image_file(*stages.binary, base + "_bin.pgm");
  if (stages.path) write_image_file(*stages.path, base + "_path.pgm");
  write_image_file(overlay, base + "_overlay.ppm");
}

}  // namespace detail

/// Run one mission: frames are rendered and processed every t_ips, their
/// output held between refreshes; planner, mission and vehicle advance every
/// t_pp tick. Terminates on mission Done/Failed or at max_time.
inline RunResult run(const SimConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  const int ips_every = cfg.ips_ticks();

  PlannerConfig planner = cfg.planner;
  planner.t_pp = cfg.t_pp;
  VehicleParams vehicle = cfg.vehicle;
  vehicle.dt = cfg.t_pp;

  DroneState drone;
  drone.x = cfg.track.start_pose.x;
  drone.y = cfg.track.start_pose.y;
  Waypoint wp{cfg.track.start_pose.x, cfg.track.start_pose.y, planner.z_h};

  VtpTracker tracker;
  IpsOutput held;
  MissionState mission;

  RunResult res;
  Outcome outcome = Outcome::Timeout;

  for (long k = 0;; ++k) {
    const double t = k * cfg.t_pp;
    if (t >= cfg.max_time - 1e-12) {
      outcome = Outcome::Timeout;
      break;
    }

    const bool refresh = k % ips_every == 0;
    if (refresh) {
      // Near-ground frames see the path magnified to full frame; a heading
      // locked from such a frame would aim the angular window anywhere, so
      // the tracker only starts persisting once take-off is over.
      if (mission.phase == MissionPhase::TakeOff) tracker = VtpTracker{};
      const double cam_alt = std::max(drone.z, detail::kMinRenderAltitude);
      const PixelFrame frame = render_frame(cfg.track, {drone.x, drone.y}, cam_alt, cfg.camera);
      if (!opts.frame_dump_dir.empty()) {
        IpsStages stages;
        const std::optional<double> mask_theta = tracker.prev_theta;
        held = process_frame(frame, tracker, cfg.ips, &stages);
        const PixelFrame overlay =
            mask_overlay(*stages.path, frame_center(frame.width(), frame.height()), mask_theta,
                         cfg.ips, held);
        detail::dump_stages(opts.frame_dump_dir, k / ips_every, frame, stages, overlay);
      } else {
        held = process_frame(frame, tracker, cfg.ips);
      }
    }

    MissionInputs in;
    in.hovering = std::abs(drone.z - planner.z_h) <= cfg.mission.hover_tol &&
                  std::abs(drone.vz) <= cfg.mission.hover_rate_tol;
    in.flag_vtp = held.flag_vtp;
    in.flag_marker = held.flag_marker;
    in.centered = held.flag_marker && std::abs(held.e_x) <= planner.centered_tol &&
                  std::abs(held.e_y) <= planner.centered_tol;
    in.landed = drone.z <= cfg.mission.ground_tol;
    in.now = t;
    const MissionPhase prev_phase = mission.phase;
    mission = step_mission(mission, in, cfg.mission.lost_timeout);

    // Entering the centering phase drops the stale look-ahead: the reference
    // restarts at the vehicle so the marker approach starts from rest instead
    // of coasting through at following speed.
    if (mission.phase == MissionPhase::EndMarker && prev_phase != MissionPhase::EndMarker)
      wp = {drone.x, drone.y, planner.z_h};

    switch (mission.phase) {
      case MissionPhase::TakeOff:
        wp = {cfg.track.start_pose.x, cfg.track.start_pose.y, planner.z_h};
        break;
      case MissionPhase::Following:
      case MissionPhase::EndMarker:
        if (planner.apply_per == PlannerConfig::ApplyPer::PpTick || refresh)
          wp = plan_step(wp, held, planner);
        break;
      case MissionPhase::Landing:
        wp = {wp.x, wp.y, 0.0};
        break;
      default:
        break;
    }

    LogRow row;
    row.t = t;
    row.x = drone.x;
    row.y = drone.y;
    row.z = drone.z;
    row.vx = drone.vx;
    row.vy = drone.vy;
    row.vz = drone.vz;
    row.v_d = std::hypot(drone.vx, drone.vy);
    row.wp_x = wp.x;
    row.wp_y = wp.y;
    row.wp_z = wp.z;
    row.e_x = held.e_x;
    row.e_y = held.e_y;
    row.flag_vtp = held.flag_vtp;
    row.flag_marker = held.flag_marker;
    row.state = mission.phase;
    res.log.rows.push_back(row);

    if (mission.phase == MissionPhase::Done) {
      outcome = Outcome::Done;
      break;
    }
    if (mission.phase == MissionPhase::Failed) {
      outcome = Outcome::Failed;
      break;
    }
    drone = step_vehicle(drone, wp, vehicle);
  }

  RunMetrics& m = res.metrics;
  m.outcome = outcome;
  m.mission_time = outcome == Outcome::Timeout
                       ? cfg.max_time
                       : (res.log.rows.empty() ? 0.0 : res.log.rows.back().t);
  double sum = 0.0;
  long n = 0;
  for (const LogRow& row : res.log.rows) {
    if (row.state != MissionPhase::Following) continue;
    const double d = path_distance(cfg.track, {row.x, row.y});
    sum += d;
    ++n;
    if (d > m.max_path_error) m.max_path_error = d;
  }
  m.mean_path_error = n > 0 ? sum / n : 0.0;
  if (!res.log.rows.empty()) {
    const LogRow& last = res.log.rows.back();
    m.landing_offset = distance({last.x, last.y}, cfg.track.marker_center);
  }
  return res;
}

struct SweepEntry {
  double alpha = 0.0;
  RunMetrics metrics;
  std::string error;  // non-empty when the run itself threw
};

/// Independent runs differing only in the following gain. Entries keep the
/// input order; a failing entry records its error and the sweep continues.
inline std::vector<SweepEntry> sweep_alpha(const SimConfig& cfg,
                                           const std::vector<double>& alphas, int jobs = 1) {
  if (alphas.empty()) throw std::invalid_argument("sweep_alpha: no alpha values");
  std::vector<SweepEntry> entries(alphas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < alphas.size(); i = next.fetch_add(1)) {
      entries[i].alpha = alphas[i];
      try {
        SimConfig local = cfg;
        local.planner.alpha = alphas[i];
        entries[i].metrics = run(local).metrics;
      } catch (const std::exception& e) {
        entries[i].error = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(alphas.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return entries;
}

namespace detail {

inline void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out += buf;
}

}  // namespace detail

inline constexpr const char* kLogCsvHeader =
    "t,x,y,z,vx,vy,vz,v_d,wp_x,wp_y,wp_z,e_x,e_y,flag_vtp,flag_marker,state";

/// CSV serialization of a run: header, one row per tick, then the metrics
/// as a '#'-prefixed key=value footer. Contains nothing time-of-day
/// dependent, so identical runs serialize identically.
inline std::string trajectory_csv(const TrajectoryLog& log, const RunMetrics& metrics) {
  std::string out = kLogCsvHeader;
  out += '\n';
  for (const LogRow& r : log.rows) {
    const double nums[] = {r.t,    r.x,    r.y,    r.z,   r.vx,  r.vy,  r.vz,
                           r.v_d,  r.wp_x, r.wp_y, r.wp_z, r.e_x, r.e_y};
    for (double v : nums) {
      detail::append_num(out, v);
      out += ',';
    }
    out += r.flag_vtp ? '1' : '0';
    out += ',';
    out += r.flag_marker ? '1' : '0';
    out += ',';
    out += to_string(r.state);
    out += '\n';
  }
  out += "# outcome=";
  out += to_string(metrics.outcome);
  out += "\n# t_s=";
  detail::append_num(out, metrics.mission_time);
  out += "\n# mean_path_error=";
  detail::append_num(out, metrics.mean_path_error);
  out += "\n# max_path_error=";
  detail::append_num(out, metrics.max_path_error);
  out += "\n# landing_offset=";
  detail::append_num(out, metrics.landing_offset);
  out += '\n';
  return out;
}

/// CSV serialization of a sweep, one row per alpha in input order.
inline std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::string out = "alpha,outcome,t_s,mean_path_error,max_path_error,landing_offset,error\n";
  for (const SweepEntry& e : entries) {
    detail::append_num(out, e.alpha);
    out += ',';
    if (e.error.empty()) {
      out += to_string(e.metrics.outcome);
      const double nums[] = {e.metrics.mission_time, e.metrics.mean_path_error,
                             e.metrics.max_path_error, e.metrics.landing_offset};
      for (double v : nums) {
        out += ',';
        detail::append_num(out, v);
      }
      out += ',';
    } else {
      out += ",,,,,";
      std::string msg = e.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      out += msg;
    }
    out += '\n';
  }
  return out;
}

}  // namespace vtpsim
