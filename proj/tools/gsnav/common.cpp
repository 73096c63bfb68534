#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "gsnav/errors.hpp"
#include "gsnav/random.hpp"

namespace gsnav::cli {

void add_common_options(CLI::App& cmd, CommonOptions& options) {
  cmd.add_option("--config", options.config, "Engine config file (defaults when omitted)");
  cmd.add_option("--seed", options.seed, "Root seed for every random stream");
  cmd.add_option("--threads", options.threads, "Worker threads (0 = all cores)");
}

EngineConfig load_engine_config(const CommonOptions& options) {
  if (options.config.empty()) return EngineConfig{};
  EngineConfig c = load_config(options.config);
  c.validate();
  return c;
}

Binning parse_binning(std::string_view name) {
  if (name == "square") return Binning::square;
  if (name == "exact") return Binning::exact;
  throw ArgumentError("binning must be square or exact, got '" + std::string(name) + "'");
}

std::string_view binning_name(Binning b) { return b == Binning::square ? "square" : "exact"; }

BodyPose parse_body_pose(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ArgumentError("--pose: '" + item + "' is not a number");
    }
  }
  if (v.size() != 7) {
    throw ArgumentError("--pose expects 7 values x,y,z,qw,qx,qy,qz, got " + std::to_string(v.size()));
  }
  BodyPose p;
  p.position = {v[0], v[1], v[2]};
  Eigen::Quaterniond q(v[3], v[4], v[5], v[6]);
  if (!(q.norm() > 1e-9) || !p.position.allFinite()) throw ArgumentError("--pose: invalid values");
  p.orientation = q.normalized();
  return p;
}

std::vector<View> sample_views(const EnvConfig& env, int count, std::uint64_t seed,
                               std::string_view stream) {
  Rng rng = make_rng(seed, stream);
  const EpisodeConfig& ep = env.episode;
  const CameraModel cam = CameraModel::from_fov(env.width, env.height, env.fov_deg);
  const double mount = env.mount_pitch_deg * std::numbers::pi / 180.0;
  const double yaw_range = std::numbers::pi / 6.0;
  std::vector<View> views;
  views.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::Vector3d p;
    for (int a = 0; a < 3; ++a) p[a] = uniform(rng, ep.start_min[a], ep.start_max[a]);
    const double yaw = uniform(rng, -yaw_range, yaw_range);
    const Eigen::Quaterniond q(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));
    views.push_back(View{cam, camera_pose_from_body(q, p, mount)});
  }
  return views;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace gsnav::cli
