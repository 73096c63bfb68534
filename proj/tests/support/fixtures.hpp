#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gsnav/camera.hpp"
#include "gsnav/gaussian_cloud.hpp"
#include "gsnav/nav_env.hpp"
#include "gsnav/rasterizer.hpp"

namespace gsnav::testing {

/// Random DC-only Gaussians in front of a camera at the origin looking down +z.
GaussianCloud random_cloud(std::size_t count, std::uint64_t seed, double anisotropy = 0.0);

/// Camera poses near the origin looking toward +z with small jitter.
std::vector<Pose> jittered_poses(int count, std::uint64_t seed);

/// Level quad state at `position` with zero velocity.
QuadState hover_state(const Eigen::Vector3d& position);

/// Free-space assets: a small floor patch far below the flight band.
SceneAssets empty_assets();

/// Env config with every random process switched off.
EnvConfig quiet_env_config();

/// Fresh per-test scratch directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& name);

double max_abs_diff(const Image& a, const Image& b);
double mean_abs_diff(const Image& a, const Image& b);

}  // namespace gsnav::testing
