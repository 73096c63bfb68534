#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsnav/random.hpp"

namespace gsnav {

/// Discrete mean-reverting noise n_{t+1} = (1 - theta) n_t + N(0, sigma^2),
/// one independent channel per sigma.
class OuNoise {
 public:
  OuNoise(double theta, std::vector<double> sigmas);

  std::span<const double> step(Rng& rng);
  void reset();

  std::span<const double> state() const { return state_; }
  double theta() const { return theta_; }
  std::span<const double> sigmas() const { return sigmas_; }
  std::size_t channels() const { return state_.size(); }

  /// Closed-form stationary standard deviation sigma / sqrt(1 - (1 - theta)^2).
  static double stationary_std(double theta, double sigma);

 private:
  double theta_;
  std::vector<double> sigmas_;
  std::vector<double> state_;
};

struct PerceptionNoiseConfig {
  bool enabled = true;
  double theta = 0.1;
  double velocity_sigma = 0.08;
  double direction_sigma = 0.05;
  double altitude_sigma = 0.03;
};

/// Observation-only offsets for body velocity, goal direction and altitude.
struct PerceptionOffsets {
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
  double altitude = 0.0;
};

class PerceptionNoise {
 public:
  explicit PerceptionNoise(PerceptionNoiseConfig config = {});

  PerceptionOffsets step(Rng& rng);
  void reset();

 private:
  PerceptionNoiseConfig config_;
  OuNoise velocity_;
  OuNoise direction_;
  OuNoise altitude_;
};

}  // namespace gsnav
