#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gsnav/gaussian_cloud.hpp"

namespace gsnav {

/// Random Gaussians scattered uniformly in an axis-aligned box.
struct RandomSceneOptions {
  std::size_t count = 1000;
  Eigen::Vector3d box_min{-1.0, -1.0, 2.0};
  Eigen::Vector3d box_max{1.0, 1.0, 6.0};
  double log_scale_min = -3.5;
  double log_scale_max = -1.5;
  /// Extra log-scale spread per axis; larger values give needle/disc shapes.
  double anisotropy = 0.0;
  double opacity_min = 0.2;
  double opacity_max = 0.95;
  bool with_sh_rest = false;
};

GaussianCloud make_random_scene(const RandomSceneOptions& options, std::uint64_t seed);

/// Vertical cylindrical pillars over a floor patch, in the z-up world frame.
struct PillarForestOptions {
  int pillars = 12;
  Eigen::Vector2d region_min{1.0, -3.0};
  Eigen::Vector2d region_max{9.0, 3.0};
  double radius = 0.15;
  double height = 2.2;
  int gaussians_per_pillar = 300;
  int floor_gaussians = 1500;
  Eigen::Vector2d floor_min{-2.0, -5.0};
  Eigen::Vector2d floor_max{12.0, 5.0};
  /// Pillar centers are rejected within this horizontal distance of any keep-clear point.
  std::vector<Eigen::Vector3d> keep_clear;
  double clear_radius = 1.0;
};

GaussianCloud make_pillar_forest(const PillarForestOptions& options, std::uint64_t seed);

}  // namespace gsnav
