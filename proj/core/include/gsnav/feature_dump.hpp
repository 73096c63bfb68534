#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gsnav {

/// Flat binary feature file: N and d as little-endian u64, N*d row-major
/// f32 values, then N label bytes.
struct FeatureDump {
  Eigen::MatrixXd features;  ///< N x d
  std::vector<std::uint8_t> labels;
};

void write_feature_dump(const std::filesystem::path& path, const Eigen::MatrixXd& features,
                        std::span<const std::uint8_t> labels);

/// Throws LoadError if the file cannot be opened and ParseError on a
/// truncated, oversized or inconsistent payload.
FeatureDump read_feature_dump(const std::filesystem::path& path);

}  // namespace gsnav
