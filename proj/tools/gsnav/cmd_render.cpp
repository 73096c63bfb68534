#include <algorithm>
#include <chrono>
#include <numbers>

#include <CLI11.hpp>

#include "app.hpp"
#include "common.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/image_io.hpp"
#include "gsnav/scene_bundle.hpp"

namespace gsnav::cli {

namespace {

struct RenderArgs {
  CommonOptions common;
  std::string pose = "0,0,1,1,0,0,0";
  std::string out;
  std::string mode = "rgb";
  std::string binning;
};

int run_render(const RenderArgs& a, std::ostream& out) {
  EngineConfig config = load_engine_config(a.common);
  if (a.mode != "rgb" && a.mode != "depth") throw ArgumentError("--mode must be rgb or depth");
  const BodyPose body = parse_body_pose(a.pose);
  RenderSettings settings = config.env.render;
  if (!a.binning.empty()) settings.binning = parse_binning(a.binning);

  const LoadedScene scene = load_scene(config, a.common.seed);
  const EnvConfig& env = scene.env;
  const CameraModel cam = CameraModel::from_fov(env.width, env.height, env.fov_deg);
  const Pose pose = camera_pose_from_body(body.orientation, body.position,
                                          env.mount_pitch_deg * std::numbers::pi / 180.0);
  const RenderMode mode = a.mode == "rgb" ? RenderMode::rgb : RenderMode::depth;

  const auto t0 = std::chrono::steady_clock::now();
  RenderOutput img = render(scene.cloud, cam, pose, mode, settings);
  const auto t1 = std::chrono::steady_clock::now();

  if (mode == RenderMode::rgb) {
    for (double& v : img.rgb.data) v = std::clamp(v, 0.0, 1.0);
    write_ppm(img.rgb, a.out);
  } else {
    write_pgm_depth(img.depth, a.out);
  }
  out << "gaussians=" << scene.cloud.size() << " binning=" << binning_name(settings.binning)
      << " render_ms=" << format_double(std::chrono::duration<double, std::milli>(t1 - t0).count())
      << '\n';
  return kExitOk;
}

}  // namespace

void register_render(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<RenderArgs>();
  CLI::App* cmd = app.add_subcommand("render", "Render one onboard-camera view to PPM (rgb) or PGM (depth)");
  add_common_options(*cmd, args->common);
  cmd->add_option("--pose", args->pose, "Body pose x,y,z,qw,qx,qy,qz");
  cmd->add_option("--out", args->out, "Output image path")->required();
  cmd->add_option("--mode", args->mode, "rgb or depth");
  cmd->add_option("--binning", args->binning, "square or exact (overrides the config)");
  cmd->callback([args, &selected, &out] { selected = [args, &out] { return run_render(*args, out); }; });
}

}  // namespace gsnav::cli
