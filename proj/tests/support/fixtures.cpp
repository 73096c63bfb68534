#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "gsnav/random.hpp"

namespace gsnav::testing {

GaussianCloud random_cloud(std::size_t count, std::uint64_t seed, double anisotropy) {
  Rng rng(seed);
  GaussianCloud c;
  c.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Vector3f mean(uniform(rng, -1.2, 1.2), uniform(rng, -0.9, 0.9), uniform(rng, 2.0, 5.0));
    const double base = uniform(rng, -3.2, -1.8);
    const Eigen::Vector3f log_scale(base + uniform(rng, -anisotropy, anisotropy),
                                    base + uniform(rng, -anisotropy, anisotropy),
                                    base + uniform(rng, -anisotropy, anisotropy));
    Eigen::Quaternionf q(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    q.normalize();
    const float logit_o = static_cast<float>(uniform(rng, -1.5, 3.0));
    // DC values keep colors inside [0, 1].
    const Eigen::Vector3f dc(uniform(rng, -1.7, 1.7), uniform(rng, -1.7, 1.7), uniform(rng, -1.7, 1.7));
    c.push_back(mean, log_scale, q, logit_o, dc);
  }
  return c;
}

std::vector<Pose> jittered_poses(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pose> poses;
  for (int i = 0; i < count; ++i) {
    const Eigen::Vector3d eye(uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), uniform(rng, -0.5, 0.3));
    const Eigen::Vector3d target(uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), 3.5);
    poses.push_back(Pose::look_at(eye, target, -Eigen::Vector3d::UnitY()));
  }
  return poses;
}

QuadState hover_state(const Eigen::Vector3d& position) {
  QuadState s;
  s.position = position;
  return s;
}

SceneAssets empty_assets() {
  GaussianCloud c;
  for (int i = 0; i < 20; ++i) {
    c.push_back(Eigen::Vector3f(20.0f + i, 0.0f, -5.0f), Eigen::Vector3f::Constant(-2.0f),
                Eigen::Quaternionf::Identity(), 2.0f, Eigen::Vector3f::Zero());
  }
  return SceneAssets::make(std::move(c));
}

EnvConfig quiet_env_config() {
  EnvConfig e;
  e.latency.enabled = false;
  e.latency.action_noise_sigma = 0.0;
  e.perception.enabled = false;
  e.visual.colors = false;
  e.visual.fov = false;
  return e;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gsnav_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double mean_abs_diff(const Image& a, const Image& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
  return a.data.empty() ? 0.0 : s / static_cast<double>(a.data.size());
}

}  // namespace gsnav::testing
