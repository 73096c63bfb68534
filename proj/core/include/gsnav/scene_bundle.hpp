#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gsnav/config.hpp"
#include "gsnav/gaussian_cloud.hpp"
#include "gsnav/nav_env.hpp"

namespace gsnav {

/// Directory holding scene.ply, an optional points.ply collision cloud and
/// scene.cfg ([scene] transform, [env] start_min / start_max / goal).
struct SceneBundle {
  GaussianCloud cloud;                                 ///< transformed into the world frame
  std::optional<std::vector<Eigen::Vector3d>> points;  ///< transformed, when present
  SceneTransform transform;
  Eigen::Vector3d start_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d start_max = Eigen::Vector3d::Zero();
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();
};

SceneBundle load_scene_bundle(const std::filesystem::path& dir);

/// Writes an untransformed cloud plus its transform and episode geometry.
void save_scene_bundle(const std::filesystem::path& dir, const GaussianCloud& cloud,
                       const std::vector<Eigen::Vector3d>* points, const SceneTransform& transform,
                       const EpisodeConfig& episode);

/// The scene named by a config: cloud in world coordinates plus collision points.
struct LoadedScene {
  GaussianCloud cloud;
  std::vector<Eigen::Vector3d> collision_points;  ///< empty: derive from the cloud
  EnvConfig env;                                  ///< config env with bundle geometry applied
};

LoadedScene load_scene(const EngineConfig& config, std::uint64_t seed);

/// Builds the shared env assets (cloud + occupancy map) for a loaded scene.
SceneAssets make_assets(const LoadedScene& scene, const SceneConfig& config);

}  // namespace gsnav
