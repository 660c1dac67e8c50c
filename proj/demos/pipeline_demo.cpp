// Minimal library walkthrough: render one downward-camera frame over a
// straight track, run the frame-processing pass, and take a planner step.

#include <cstdio>

#include "vtpsim/config.hpp"
#include "vtpsim/image_io.hpp"
#include "vtpsim/sim.hpp"

int main() {
  using namespace vtpsim;

  const TrackSpec track = parse_track(
      "width 0.05\n"
      "line 0 0 2 0\n"
      "marker 2 0 0.2\n");

  SimConfig cfg = default_sim_config();
  cfg.track = track;

  // Hovering over the start of the path.
  const PixelFrame frame = render_frame(track, track.start_pose, cfg.planner.z_h, cfg.camera);
  write_image_file(frame, "demo_frame.ppm");

  VtpTracker tracker;
  const IpsOutput out = process_frame(frame, tracker, cfg.ips);
  std::printf("flag_vtp=%d flag_marker=%d e=(%.2f, %.2f) px\n", out.flag_vtp, out.flag_marker,
              out.e_x, out.e_y);

  Waypoint wp{track.start_pose.x, track.start_pose.y, cfg.planner.z_h};
  wp = plan_step(wp, out, cfg.planner);
  std::printf("next waypoint (%.4f, %.4f, %.2f) m\n", wp.x, wp.y, wp.z);
  std::printf("predicted cruise speed %.3f m/s\n", predicted_speed(cfg.planner, cfg.ips));
  std::printf("wrote demo_frame.ppm\n");
  return 0;
}
