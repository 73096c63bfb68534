#include "gsnav/gaussian_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gsnav/errors.hpp"
#include "gsnav/random.hpp"

namespace gsnav {

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

float logit(float p) { return std::log(p / (1.0f - p)); }

void GaussianCloud::reserve(std::size_t n) {
  means.reserve(n);
  log_scales.reserve(n);
  rotations.reserve(n);
  opacity_logits.reserve(n);
  sh_dc.reserve(n);
}

void GaussianCloud::push_back(const Eigen::Vector3f& mean, const Eigen::Vector3f& log_scale,
                              const Eigen::Quaternionf& rotation, float opacity_logit,
                              const Eigen::Vector3f& dc, std::span<const float> rest) {
  if (!rest.empty() && rest.size() != kShRestCount) {
    throw ArgumentError("sh_rest must hold " + std::to_string(kShRestCount) + " coefficients");
  }
  if (!empty() && rest.empty() == has_sh_rest()) {
    if (!rest.empty()) throw ArgumentError("cannot add SH rest coefficients to a DC-only cloud");
    throw ArgumentError("missing SH rest coefficients for a cloud that carries them");
  }
  means.push_back(mean);
  log_scales.push_back(log_scale);
  rotations.push_back(rotation);
  opacity_logits.push_back(opacity_logit);
  sh_dc.push_back(dc);
  sh_rest.insert(sh_rest.end(), rest.begin(), rest.end());
}

float GaussianCloud::opacity(std::size_t i) const { return sigmoid(opacity_logits[i]); }

std::span<const float> GaussianCloud::rest_of(std::size_t i) const {
  if (!has_sh_rest()) return {};
  return std::span<const float>(sh_rest).subspan(i * kShRestCount, kShRestCount);
}

void GaussianCloud::check_consistent() const {
  const std::size_t n = size();
  if (log_scales.size() != n || rotations.size() != n || opacity_logits.size() != n ||
      sh_dc.size() != n || (!sh_rest.empty() && sh_rest.size() != n * kShRestCount)) {
    throw ArgumentError("gaussian cloud arrays disagree in length");
  }
}

SceneTransform SceneTransform::inverse() const {
  SceneTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = rotation.conjugate();
  inv.translation = -(inv.rotation * translation) / scale;
  return inv;
}

Eigen::Vector3d SceneTransform::apply(const Eigen::Vector3d& p) const {
  return scale * (rotation.toRotationMatrix() * p) + translation;
}

GaussianCloud apply_transform(const GaussianCloud& cloud, const SceneTransform& t) {
  if (!(t.scale > 0.0)) throw ArgumentError("scene transform scale must be positive");
  const Eigen::Quaterniond q = t.rotation.normalized();
  const Eigen::Matrix3d rot = q.toRotationMatrix();
  const double log_scale_shift = std::log(t.scale);

  GaussianCloud out = cloud;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d mu = cloud.means[i].cast<double>();
    out.means[i] = (t.scale * (rot * mu) + t.translation).cast<float>();
    out.log_scales[i] =
        (cloud.log_scales[i].cast<double>().array() + log_scale_shift).matrix().cast<float>();
    out.rotations[i] = (q * cloud.rotations[i].cast<double>()).cast<float>();
  }
  return out;
}

GaussianCloud randomize_colors(const GaussianCloud& cloud, const ColorRandomization& cr,
                               std::uint64_t seed) {
  Rng rng(seed);
  GaussianCloud out = cloud;
  for (auto& dc : out.sh_dc) {
    for (int c = 0; c < 3; ++c) {
      const double eps = normal(rng, cr.noise_sigma);
      dc[c] = static_cast<float>(cr.alpha * dc[c] + cr.beta + eps);
    }
  }
  return out;
}

std::vector<Eigen::Vector3d> extract_point_cloud(const GaussianCloud& cloud, double opacity_min) {
  if (opacity_min < 0.0 || opacity_min >= 1.0) {
    throw ArgumentError("opacity_min must lie in [0, 1)");
  }
  std::vector<Eigen::Vector3d> points;
  points.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.opacity(i) >= opacity_min) points.push_back(cloud.means[i].cast<double>());
  }
  return points;
}

GaussianCloud select(const GaussianCloud& cloud, std::span<const std::size_t> indices) {
  GaussianCloud out;
  out.reserve(indices.size());
  if (cloud.has_sh_rest()) out.sh_rest.reserve(indices.size() * kShRestCount);
  for (std::size_t i : indices) {
    if (i >= cloud.size()) throw ArgumentError("gaussian index out of range");
    out.means.push_back(cloud.means[i]);
    out.log_scales.push_back(cloud.log_scales[i]);
    out.rotations.push_back(cloud.rotations[i]);
    out.opacity_logits.push_back(cloud.opacity_logits[i]);
    out.sh_dc.push_back(cloud.sh_dc[i]);
    const auto rest = cloud.rest_of(i);
    out.sh_rest.insert(out.sh_rest.end(), rest.begin(), rest.end());
  }
  return out;
}

GaussianCloud prune(const GaussianCloud& cloud, std::span<const double> scores,
                    double keep_fraction) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
    throw ArgumentError("keep_fraction must lie in (0, 1]");
  }
  const std::size_t n = cloud.size();
  if (scores.size() != n) throw ArgumentError("prune: one score per gaussian required");
  for (double s : scores) {
    if (std::isnan(s)) throw ArgumentError("prune: NaN importance score");
  }

  // The relative slack keeps fractions such as 2/3 from rounding up past the
  // intended count.
  const double target = keep_fraction * static_cast<double>(n);
  std::size_t keep = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
  keep = std::clamp<std::size_t>(keep, n == 0 ? 0 : 1, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return select(cloud, order);
}

}  // namespace gsnav
