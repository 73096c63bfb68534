#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gsnav {

/// Dense voxel grid of obstacle points inflated by a ball of radius
/// `inflation`. A voxel is marked when its center lies within
/// inflation + half the voxel diagonal of some point, so every inflated
/// ball is fully covered.
class OccupancyMap {
 public:
  OccupancyMap() = default;

  static OccupancyMap build(std::span<const Eigen::Vector3d> points, double voxel = 0.1,
                            double inflation = 0.2, bool outside_occupied = false);

  bool occupied(const Eigen::Vector3d& p) const;
  bool inside_bounds(const Eigen::Vector3d& p) const;

  double voxel_size() const { return voxel_; }
  double inflation() const { return inflation_; }
  bool empty() const { return occupied_count_ == 0; }
  std::size_t occupied_count() const { return occupied_count_; }
  const Eigen::Vector3d& bounds_min() const { return origin_; }
  Eigen::Vector3d bounds_max() const { return origin_ + dims_.cast<double>() * voxel_; }

 private:
  std::size_t linear(const Eigen::Vector3i& v) const {
    return (static_cast<std::size_t>(v.z()) * dims_.y() + v.y()) * dims_.x() + v.x();
  }
  bool test(std::size_t bit) const { return (bits_[bit >> 6] >> (bit & 63)) & 1u; }

  Eigen::Vector3d origin_ = Eigen::Vector3d::Zero();
  Eigen::Vector3i dims_ = Eigen::Vector3i::Zero();
  double voxel_ = 0.1;
  double inflation_ = 0.2;
  bool outside_occupied_ = false;
  std::size_t occupied_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace gsnav
