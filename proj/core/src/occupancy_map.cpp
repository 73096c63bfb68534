#include "gsnav/occupancy_map.hpp"

#include <cmath>
#include <limits>

#include "gsnav/errors.hpp"

namespace gsnav {

OccupancyMap OccupancyMap::build(std::span<const Eigen::Vector3d> points, double voxel,
                                 double inflation, bool outside_occupied) {
  if (!(voxel > 0.0)) throw ArgumentError("voxel size must be positive");
  if (inflation < 0.0) throw ArgumentError("inflation must be non-negative");

  OccupancyMap map;
  map.voxel_ = voxel;
  map.inflation_ = inflation;
  map.outside_occupied_ = outside_occupied;
  if (points.empty()) return map;

  const double reach = inflation + 0.5 * std::sqrt(3.0) * voxel;
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& p : points) {
    if (!p.allFinite()) throw ArgumentError("occupancy points must be finite");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector3d pad = Eigen::Vector3d::Constant(reach + voxel);
  map.origin_ = lo - pad;
  const Eigen::Vector3d extent = (hi + pad) - map.origin_;
  for (int a = 0; a < 3; ++a) {
    map.dims_[a] = static_cast<int>(std::ceil(extent[a] / voxel));
  }
  const std::size_t total = static_cast<std::size_t>(map.dims_.x()) * map.dims_.y() * map.dims_.z();
  map.bits_.assign((total + 63) / 64, 0);

  const double reach_sq = reach * reach;
  for (const auto& p : points) {
    const Eigen::Vector3d rel = p - map.origin_;
    Eigen::Vector3i v0, v1;
    for (int a = 0; a < 3; ++a) {
      v0[a] = std::max(0, static_cast<int>(std::floor((rel[a] - reach) / voxel)));
      v1[a] = std::min(map.dims_[a] - 1, static_cast<int>(std::floor((rel[a] + reach) / voxel)));
    }
    for (int z = v0.z(); z <= v1.z(); ++z) {
      for (int y = v0.y(); y <= v1.y(); ++y) {
        for (int x = v0.x(); x <= v1.x(); ++x) {
          const Eigen::Vector3d center = (Eigen::Vector3d(x, y, z).array() + 0.5).matrix() * voxel;
          if ((center - rel).squaredNorm() > reach_sq) continue;
          const std::size_t bit = map.linear({x, y, z});
          std::uint64_t& word = map.bits_[bit >> 6];
          const std::uint64_t mask = std::uint64_t{1} << (bit & 63);
          if (!(word & mask)) {
            word |= mask;
            ++map.occupied_count_;
          }
        }
      }
    }
  }
  return map;
}

bool OccupancyMap::inside_bounds(const Eigen::Vector3d& p) const {
  if (bits_.empty()) return false;
  const Eigen::Vector3d rel = (p - origin_) / voxel_;
  for (int a = 0; a < 3; ++a) {
    if (!(rel[a] >= 0.0 && rel[a] < dims_[a])) return false;
  }
  return true;
}

bool OccupancyMap::occupied(const Eigen::Vector3d& p) const {
  if (!inside_bounds(p)) return bits_.empty() ? false : outside_occupied_;
  const Eigen::Vector3d rel = (p - origin_) / voxel_;
  const Eigen::Vector3i v(static_cast<int>(rel.x()), static_cast<int>(rel.y()),
                          static_cast<int>(rel.z()));
  return test(linear(v));
}

}  // namespace gsnav
