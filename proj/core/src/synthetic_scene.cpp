#include "gsnav/synthetic_scene.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gsnav/errors.hpp"
#include "gsnav/random.hpp"

namespace gsnav {
namespace {

Eigen::Quaternionf random_rotation(Rng& rng) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  Eigen::Quaternionf q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

Eigen::Vector3f random_dc(Rng& rng) {
  std::uniform_real_distribution<float> u(-1.5f, 1.5f);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

GaussianCloud make_random_scene(const RandomSceneOptions& options, std::uint64_t seed) {
  if (options.opacity_min <= 0.0 || options.opacity_max >= 1.0 ||
      options.opacity_min > options.opacity_max) {
    throw ArgumentError("random scene opacities must satisfy 0 < min <= max < 1");
  }
  Rng rng(seed);
  GaussianCloud cloud;
  cloud.reserve(options.count);
  std::array<float, kShRestCount> rest{};
  std::normal_distribution<float> rest_dist(0.0f, 0.1f);
  for (std::size_t i = 0; i < options.count; ++i) {
    Eigen::Vector3f mean;
    for (int c = 0; c < 3; ++c) {
      mean[c] = static_cast<float>(uniform(rng, options.box_min[c], options.box_max[c]));
    }
    const double base = uniform(rng, options.log_scale_min, options.log_scale_max);
    Eigen::Vector3f log_scale;
    for (int c = 0; c < 3; ++c) {
      const double spread =
          options.anisotropy > 0.0 ? uniform(rng, -options.anisotropy, options.anisotropy) : 0.0;
      log_scale[c] = static_cast<float>(base + spread);
    }
    const Eigen::Quaternionf rot = random_rotation(rng);
    const float op = static_cast<float>(uniform(rng, options.opacity_min, options.opacity_max));
    const Eigen::Vector3f dc = random_dc(rng);
    std::span<const float> rest_span;
    if (options.with_sh_rest) {
      for (float& v : rest) v = rest_dist(rng);
      rest_span = rest;
    }
    cloud.push_back(mean, log_scale, rot, logit(op), dc, rest_span);
  }
  return cloud;
}

GaussianCloud make_pillar_forest(const PillarForestOptions& options, std::uint64_t seed) {
  Rng rng(seed);
  GaussianCloud cloud;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Eigen::Vector2d> centers;
  int attempts = 0;
  while (static_cast<int>(centers.size()) < options.pillars && attempts < 100000) {
    ++attempts;
    Eigen::Vector2d c(uniform(rng, options.region_min.x(), options.region_max.x()),
                      uniform(rng, options.region_min.y(), options.region_max.y()));
    bool ok = true;
    for (const auto& k : options.keep_clear) {
      if ((c - k.head<2>()).norm() < options.clear_radius) ok = false;
    }
    for (const auto& other : centers) {
      if ((c - other).norm() < 4.0 * options.radius) ok = false;
    }
    if (ok) centers.push_back(c);
  }

  const float pillar_log_scale = static_cast<float>(std::log(options.radius * 0.35));
  for (const auto& c : centers) {
    const Eigen::Vector3f tint = random_dc(rng) * 0.5f;
    for (int k = 0; k < options.gaussians_per_pillar; ++k) {
      const double phi = 2.0 * std::numbers::pi * unit(rng);
      const double z = options.height * unit(rng);
      Eigen::Vector3f mean(static_cast<float>(c.x() + options.radius * std::cos(phi)),
                           static_cast<float>(c.y() + options.radius * std::sin(phi)),
                           static_cast<float>(z));
      Eigen::Vector3f log_scale = Eigen::Vector3f::Constant(pillar_log_scale);
      log_scale.z() += 0.7f;
      const Eigen::Quaternionf yaw(Eigen::AngleAxisf(static_cast<float>(phi), Eigen::Vector3f::UnitZ()));
      const Eigen::Vector3f dc = tint + 0.3f * random_dc(rng);
      cloud.push_back(mean, log_scale, yaw, logit(0.9f), dc);
    }
  }

  for (int k = 0; k < options.floor_gaussians; ++k) {
    Eigen::Vector3f mean(static_cast<float>(uniform(rng, options.floor_min.x(), options.floor_max.x())),
                         static_cast<float>(uniform(rng, options.floor_min.y(), options.floor_max.y())),
                         0.0f);
    // Flat discs lying on the floor.
    const Eigen::Vector3f log_scale(-1.2f, -1.2f, -4.5f);
    const Eigen::Quaternionf yaw(
        Eigen::AngleAxisf(static_cast<float>(2.0 * std::numbers::pi * unit(rng)), Eigen::Vector3f::UnitZ()));
    Eigen::Vector3f dc = Eigen::Vector3f::Constant(-0.4f) + 0.2f * random_dc(rng);
    cloud.push_back(mean, log_scale, yaw, logit(0.8f), dc);
  }
  return cloud;
}

}  // namespace gsnav
