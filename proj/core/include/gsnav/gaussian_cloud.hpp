#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gsnav {

/// Number of higher-order SH coefficients per Gaussian (degree 3, 15 per channel).
inline constexpr std::size_t kShRestCount = 45;
inline constexpr std::size_t kShRestPerChannel = kShRestCount / 3;

/// A 3D Gaussian Splatting scene in the reference storage convention:
/// log-scales, opacity logits, and SH coefficients. `sh_rest` is either empty
/// (DC-only model) or holds kShRestCount floats per Gaussian laid out like the
/// PLY `f_rest_*` block (all red coefficients, then green, then blue).
struct GaussianCloud {
  std::vector<Eigen::Vector3f> means;
  std::vector<Eigen::Vector3f> log_scales;
  std::vector<Eigen::Quaternionf> rotations;
  std::vector<float> opacity_logits;
  std::vector<Eigen::Vector3f> sh_dc;
  std::vector<float> sh_rest;

  std::size_t size() const { return means.size(); }
  bool empty() const { return means.empty(); }
  bool has_sh_rest() const { return !sh_rest.empty(); }

  void reserve(std::size_t n);
  /// Appends one Gaussian; `rest` must be empty or kShRestCount long and
  /// consistent with the cloud's existing SH layout.
  void push_back(const Eigen::Vector3f& mean, const Eigen::Vector3f& log_scale,
                 const Eigen::Quaternionf& rotation, float opacity_logit,
                 const Eigen::Vector3f& dc, std::span<const float> rest = {});

  float opacity(std::size_t i) const;
  std::span<const float> rest_of(std::size_t i) const;

  /// Throws ArgumentError when array lengths disagree.
  void check_consistent() const;
};

float sigmoid(float x);
float logit(float p);

struct SceneTransform {
  double scale = 1.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  SceneTransform inverse() const;
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const;
};

/// Affine DC color perturbation C' = alpha * C + beta + eps, eps ~ N(0, noise_sigma^2).
struct ColorRandomization {
  double alpha = 1.0;
  double beta = 0.0;
  double noise_sigma = 0.0;
};

/// Sampling ranges for ColorRandomization; defaults are the training-time
/// randomization ranges.
struct ColorRandomizationRanges {
  double alpha_min = 0.8;
  double alpha_max = 1.3;
  double beta_min = -0.05;
  double beta_max = 0.05;
  double noise_sigma = 0.025;

  template <class Urbg>
  ColorRandomization sample(Urbg& rng) const {
    std::uniform_real_distribution<double> a(alpha_min, alpha_max);
    std::uniform_real_distribution<double> b(beta_min, beta_max);
    const double alpha = a(rng);
    return {alpha, b(rng), noise_sigma};
  }
};

GaussianCloud apply_transform(const GaussianCloud& cloud, const SceneTransform& t);

GaussianCloud randomize_colors(const GaussianCloud& cloud, const ColorRandomization& cr,
                               std::uint64_t seed);

std::vector<Eigen::Vector3d> extract_point_cloud(const GaussianCloud& cloud, double opacity_min);

/// Keeps the ceil(keep_fraction * count) highest-scoring Gaussians in their
/// original order; equal scores prefer the lower index.
GaussianCloud prune(const GaussianCloud& cloud, std::span<const double> scores,
                    double keep_fraction);

/// Subset of `cloud` at the given indices, in the given order.
GaussianCloud select(const GaussianCloud& cloud, std::span<const std::size_t> indices);

}  // namespace gsnav
