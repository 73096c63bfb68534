#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsnav/camera.hpp"
#include "gsnav/gaussian_cloud.hpp"

namespace gsnav {

enum class RenderMode { rgb, depth, rgbd };
enum class Binning { square, exact };

struct RenderSettings {
  int tile_size = 16;
  double near_plane = 0.05;
  /// Added to the diagonal of every projected covariance (pixels^2).
  double blur = 0.3;
  double alpha_max = 0.99;
  /// Footprint threshold: a Gaussian covers a pixel only where o * G >= alpha_min.
  /// Also the eps of exact tile binning.
  double alpha_min = 1.0 / 255.0;
  /// Footprint is additionally limited to the support_sigma Mahalanobis
  /// radius, which keeps every footprint inside its ceil(3 sqrt(lambda_max)) square.
  double support_sigma = 3.0;
  double min_transmittance = 1e-4;
  double far_depth = 20.0;
  Eigen::Vector3d background = Eigen::Vector3d::Zero();
  Binning binning = Binning::exact;
};

struct ProjectedGaussian {
  std::uint32_t index = 0;  ///< position in the source cloud
  Eigen::Vector2d mean2d = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov2d = Eigen::Matrix2d::Identity();
  /// Inverse of cov2d stored as (a, b, c) for [[a, b], [b, c]].
  Eigen::Vector3d conic = Eigen::Vector3d::Zero();
  double depth = 0.0;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
  double opacity = 0.0;
  /// Mahalanobis-squared footprint limit; negative means the Gaussian covers nothing.
  double footprint = -1.0;

  double mahalanobis_sq(double dx, double dy) const {
    return conic[0] * dx * dx + 2.0 * conic[1] * dx * dy + conic[2] * dy * dy;
  }
};

/// Perspective (EWA) projection of every Gaussian in front of the near plane.
/// View-dependent color comes from SH along the camera-to-mean ray.
std::vector<ProjectedGaussian> project(const GaussianCloud& cloud, const CameraModel& cam,
                                       const Pose& pose, const RenderSettings& settings = {});

struct TileEntry {
  std::uint32_t gaussian = 0;  ///< index into the projected list
  double depth = 0.0;
};

struct TileBins {
  int tile_size = 16;
  int tiles_x = 0;
  int tiles_y = 0;
  std::vector<std::vector<TileEntry>> tiles;  ///< row-major, each sorted front to back

  const std::vector<TileEntry>& at(int tx, int ty) const { return tiles[ty * tiles_x + tx]; }
  std::size_t pair_count() const;
  /// Tile indices (row-major) that list projected Gaussian `g`.
  std::vector<int> tiles_of(std::uint32_t g) const;
};

/// Square radius of the reference binning: ceil(3 sqrt(lambda_max(cov2d))).
int square_radius(const Eigen::Matrix2d& cov2d);

TileBins tile_bins_square(std::span<const ProjectedGaussian> projected, const CameraModel& cam,
                          int tile_size = 16);

/// Bins each Gaussian only to tiles whose pixel-center rectangle meets its
/// footprint ellipse {d : d^T cov2d^-1 d <= min(sigma^2, 2 ln(o / eps))}.
TileBins tile_bins_exact(std::span<const ProjectedGaussian> projected, const CameraModel& cam,
                         int tile_size = 16, double eps = 1.0 / 255.0, double support_sigma = 3.0);

/// True when the ellipse {d : d^T conic d <= level} centered at `center`
/// meets the axis-aligned rectangle [lo, hi].
bool ellipse_meets_rect(const Eigen::Vector2d& center, const Eigen::Vector3d& conic, double level,
                        const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);

struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c = 0) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  double at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool empty() const { return data.empty(); }
};

struct RenderOutput {
  Image rgb;    ///< 3 channels, empty in depth mode
  Image depth;  ///< 1 channel (meters), empty in rgb mode
  Image alpha;  ///< accumulated opacity per pixel
};

/// Tile-based front-to-back compositing. `alpha_gains`, when non-empty, holds
/// one multiplier per cloud Gaussian applied to its alpha before clamping.
RenderOutput render(const GaussianCloud& cloud, const CameraModel& cam, const Pose& pose,
                    RenderMode mode, const RenderSettings& settings = {},
                    std::span<const double> alpha_gains = {});

/// Renders already-projected Gaussians (shared by render and the benchmarks).
RenderOutput composite(std::span<const ProjectedGaussian> projected, const TileBins& bins,
                       const CameraModel& cam, RenderMode mode, const RenderSettings& settings,
                       std::span<const double> alpha_gains = {});

struct RenderJob {
  const GaussianCloud* cloud = nullptr;
  CameraModel camera;
  Pose pose;
};

/// Renders every job; entry i equals render() on job i. Jobs may share or
/// differ in cloud. `threads` = 0 uses all hardware threads.
std::vector<RenderOutput> render_batch(std::span<const RenderJob> jobs, RenderMode mode,
                                       const RenderSettings& settings = {}, unsigned threads = 0);

struct View {
  CameraModel camera;
  Pose pose;
};

/// Per-Gaussian sensitivity: sum over views, pixels and RGB channels of
/// (dC / dg_i)^2 where g_i scales alpha_i and is evaluated at 1.
std::vector<double> importance_scores(const GaussianCloud& cloud, std::span<const View> views,
                                      const RenderSettings& settings = {}, unsigned threads = 0);

/// Peak signal-to-noise ratio in dB for images with values in [0, peak].
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Evaluates SH color (degree <= 3) for unit direction `dir`; DC-only when `rest` is empty.
Eigen::Vector3d sh_to_color(const Eigen::Vector3f& dc, std::span<const float> rest,
                            const Eigen::Vector3d& dir);

}  // namespace gsnav
