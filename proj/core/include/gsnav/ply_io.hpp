#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "gsnav/gaussian_cloud.hpp"

namespace gsnav {

/// Reads a binary little-endian 3DGS PLY (x,y,z, optional normals, f_dc_0..2,
/// optional f_rest_0..44, opacity, scale_0..2, rot_0..3). Quaternions are
/// normalized on load.
/// Throws ParseError for header problems ("missing property: <name>") and
/// LoadError for unreadable files or non-finite payload values.
GaussianCloud load_ply(const std::filesystem::path& path);

/// Writes the reference property layout with zeroed normals.
void save_ply(const GaussianCloud& cloud, const std::filesystem::path& path);

/// Binary little-endian PLY with only x,y,z float vertices (collision clouds).
std::vector<Eigen::Vector3d> load_points_ply(const std::filesystem::path& path);
void save_points_ply(const std::vector<Eigen::Vector3d>& points, const std::filesystem::path& path);

}  // namespace gsnav
