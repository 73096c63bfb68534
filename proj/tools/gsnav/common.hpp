#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gsnav/camera.hpp"
#include "gsnav/config.hpp"
#include "gsnav/rasterizer.hpp"

namespace CLI {
class App;
}

namespace gsnav::cli {

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

using Command = std::function<int()>;

/// Adds --config, --seed and --threads to a subcommand.
void add_common_options(CLI::App& cmd, CommonOptions& options);

/// Defaults when no --config is given.
EngineConfig load_engine_config(const CommonOptions& options);

Binning parse_binning(std::string_view name);
std::string_view binning_name(Binning b);

/// x,y,z,qw,qx,qy,qz: drone body position and body-to-world rotation.
struct BodyPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};
BodyPose parse_body_pose(const std::string& text);

/// Onboard-camera views from random body poses in the episode start region,
/// yawed within +-30 degrees of the world +x axis.
std::vector<View> sample_views(const EnvConfig& env, int count, std::uint64_t seed,
                               std::string_view stream);

std::string format_double(double v);

// Subcommand registration; each sets `selected` when its subcommand is parsed.
void register_render(CLI::App& app, Command& selected, std::ostream& out);
void register_bench(CLI::App& app, Command& selected, std::ostream& out);
void register_prune(CLI::App& app, Command& selected, std::ostream& out);
void register_rollout(CLI::App& app, Command& selected, std::ostream& out);
void register_da_demo(CLI::App& app, Command& selected, std::ostream& out);
void register_generate(CLI::App& app, Command& selected, std::ostream& out);
void register_config(CLI::App& app, Command& selected, std::ostream& out);

}  // namespace gsnav::cli
