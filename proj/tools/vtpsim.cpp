// Command-line front end: run missions, sweep the following gain, render
// single frames, and validate track files.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtpsim/config.hpp"
#include "vtpsim/image_io.hpp"
#include "vtpsim/sim.hpp"

namespace {

constexpr int kExitMissionFailed = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;
constexpr int kExitNoInput = 66;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CliError{kExitNoInput, "cannot open file: " + path};
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

vtpsim::SimConfig make_config(const std::string& track_path,
                              const std::vector<std::string>& overrides) {
  vtpsim::SimConfig cfg = vtpsim::default_sim_config();
  try {
    cfg.track = vtpsim::parse_track(read_file(track_path));
  } catch (const vtpsim::TrackParseError& e) {
    throw CliError{kExitConfig, track_path + ": " + e.what()};
  }
  try {
    for (const std::string& expr : overrides) vtpsim::apply_override_expr(cfg, expr);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    if (msg.find("unknown config key") != std::string::npos) {
      msg += "\nvalid keys:";
      for (const char* key : vtpsim::kOverrideKeys) msg += std::string("\n  ") + key;
    }
    throw CliError{kExitConfig, msg};
  }
  return cfg;
}

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("VTP_OUT"); env && *env) return env;
  return "out";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CliError{kExitNoInput, "cannot write: " + path};
  os << content;
}

// Wall-clock metadata lives here and only here; the data files stay
// reproducible byte for byte.
void write_sidecar(const std::string& path, int argc, char** argv) {
  std::ostringstream info;
  const std::time_t now = std::time(nullptr);
  char stamp[32] = "unknown";
  if (std::tm tm_buf{}; gmtime_r(&now, &tm_buf) != nullptr)
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_buf);
  info << "created=" << stamp << "\ncommand=";
  for (int i = 0; i < argc; ++i) info << (i ? " " : "") << argv[i];
  info << '\n';
  write_text_file(path, info.str());
}

std::string metrics_json(const vtpsim::RunMetrics& m) {
  nlohmann::ordered_json j;
  j["outcome"] = vtpsim::to_string(m.outcome);
  j["t_s"] = m.mission_time;
  j["mean_path_error"] = m.mean_path_error;
  j["max_path_error"] = m.max_path_error;
  j["landing_offset"] = m.landing_offset;
  return j.dump(2) + "\n";
}

int cmd_run(const std::string& track_path, const std::vector<std::string>& overrides,
            const std::string& out_flag, bool dump_frames, int argc, char** argv) {
  const vtpsim::SimConfig cfg = make_config(track_path, overrides);
  const std::string dir = output_dir(out_flag);
  std::filesystem::create_directories(dir);

  vtpsim::RunOptions opts;
  if (dump_frames) opts.frame_dump_dir = dir + "/frames";
  const vtpsim::RunResult res = vtpsim::run(cfg, opts);

  write_text_file(dir + "/log.csv", vtpsim::trajectory_csv(res.log, res.metrics));
  write_text_file(dir + "/metrics.json", metrics_json(res.metrics));
  write_sidecar(dir + "/run_info.txt", argc, argv);

  std::printf("outcome=%s t_s=%.3f mean_path_error=%.4f landing_offset=%.4f\n",
              vtpsim::to_string(res.metrics.outcome), res.metrics.mission_time,
              res.metrics.mean_path_error, res.metrics.landing_offset);
  std::printf("wrote %s/log.csv and %s/metrics.json\n", dir.c_str(), dir.c_str());
  return res.metrics.outcome == vtpsim::Outcome::Done ? 0 : kExitMissionFailed;
}

int cmd_sweep(const std::string& track_path, const std::vector<std::string>& overrides,
              const std::string& alpha_list, int jobs, const std::string& out_flag,
              int argc, char** argv) {
  const vtpsim::SimConfig cfg = make_config(track_path, overrides);

  std::vector<double> alphas;
  std::istringstream iss(alpha_list);
  std::string item;
  while (std::getline(iss, item, ',')) {
    try {
      alphas.push_back(vtpsim::detail::parse_double(item));
    } catch (const std::invalid_argument&) {
      throw CliError{kExitConfig, "bad alpha value: '" + item + "'"};
    }
    if (!(alphas.back() > 0.0)) throw CliError{kExitConfig, "alpha values must be > 0"};
  }
  if (alphas.empty()) throw CliError{kExitConfig, "no alpha values given"};

  const auto entries = vtpsim::sweep_alpha(cfg, alphas, jobs);
  const std::string dir = output_dir(out_flag);
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/sweep.csv", vtpsim::sweep_csv(entries));
  write_sidecar(dir + "/run_info.txt", argc, argv);

  for (const auto& e : entries) {
    if (e.error.empty())
      std::printf("alpha=%g outcome=%s t_s=%.3f mean_path_error=%.4f\n", e.alpha,
                  vtpsim::to_string(e.metrics.outcome), e.metrics.mission_time,
                  e.metrics.mean_path_error);
    else
      std::printf("alpha=%g error=%s\n", e.alpha, e.error.c_str());
  }
  std::printf("wrote %s/sweep.csv\n", dir.c_str());
  return 0;
}

int cmd_render(const std::string& track_path, const std::vector<std::string>& overrides,
               const std::string& at, const std::string& out_file) {
  const vtpsim::SimConfig cfg = make_config(track_path, overrides);

  double x = 0.0, y = 0.0, z = cfg.planner.z_h;
  {
    std::istringstream iss(at);
    std::string part;
    std::vector<double> vals;
    while (std::getline(iss, part, ',')) {
      try {
        vals.push_back(vtpsim::detail::parse_double(part));
      } catch (const std::invalid_argument&) {
        throw CliError{kExitConfig, "bad --at coordinate: '" + part + "'"};
      }
    }
    if (vals.size() != 3) throw CliError{kExitConfig, "--at expects x,y,z"};
    x = vals[0];
    y = vals[1];
    z = vals[2];
    if (!(z > 0.0)) throw CliError{kExitConfig, "--at altitude must be > 0"};
  }

  std::string path = out_file;
  if (path.empty()) {
    const std::string dir = output_dir("");
    std::filesystem::create_directories(dir);
    path = dir + "/frame.ppm";
  } else if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  const vtpsim::PixelFrame frame = vtpsim::render_frame(cfg.track, {x, y}, z, cfg.camera);
  try {
    vtpsim::write_image_file(frame, path);
  } catch (const std::runtime_error& e) {
    throw CliError{kExitNoInput, e.what()};
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_check(const std::string& track_path) {
  std::string text = read_file(track_path);
  try {
    const vtpsim::TrackSpec track = vtpsim::parse_track(text);
    std::printf("track OK: %zu segments, length %.3f m, width %.3f m\n", track.segments.size(),
                track.total_length(), track.path_width);
    std::printf("start (%g, %g), marker (%g, %g) diameter %g m\n", track.start_pose.x,
                track.start_pose.y, track.marker_center.x, track.marker_center.y,
                track.marker_diameter);
    return 0;
  } catch (const vtpsim::TrackParseError& e) {
    std::fprintf(stderr, "%s: %s\n", track_path.c_str(), e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vision-guided path-following mission simulator"};
  app.require_subcommand(1);

  std::string track_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string alpha_list;
  std::string at = "0,0,1";
  std::string render_out;
  bool dump_frames = false;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--track", track_path, "track file")->required();
    sub->add_option("--set", overrides, "config override key=value (repeatable)");
    if (with_out) sub->add_option("--out", out_dir, "output directory (default $VTP_OUT or ./out)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "fly one mission and write log + metrics");
  add_common(run_cmd, true);
  run_cmd->add_flag("--dump-frames", dump_frames, "dump per-frame stage images");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run once per alpha value, write metrics CSV");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--alpha", alpha_list, "comma-separated alpha values")->required();
  sweep_cmd->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  CLI::App* render_cmd = app.add_subcommand("render", "render one camera frame as PPM");
  add_common(render_cmd, false);
  render_cmd->add_option("--at", at, "drone pose x,y,z (default 0,0,1)");
  render_cmd->add_option("--out", render_out, "output image path");

  CLI::App* check_cmd = app.add_subcommand("check", "validate a track file");
  check_cmd->add_option("--track", track_path, "track file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(run_cmd))
      return cmd_run(track_path, overrides, out_dir, dump_frames, argc, argv);
    if (app.got_subcommand(sweep_cmd))
      return cmd_sweep(track_path, overrides, alpha_list, jobs, out_dir, argc, argv);
    if (app.got_subcommand(render_cmd))
      return cmd_render(track_path, overrides, at, render_out);
    if (app.got_subcommand(check_cmd)) return cmd_check(track_path);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitUsage;
}
