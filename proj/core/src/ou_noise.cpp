#include "gsnav/ou_noise.hpp"

#include <algorithm>
#include <cmath>

#include "gsnav/errors.hpp"

namespace gsnav {

OuNoise::OuNoise(double theta, std::vector<double> sigmas)
    : theta_(theta), sigmas_(std::move(sigmas)), state_(sigmas_.size(), 0.0) {
  if (!(theta > 0.0 && theta < 1.0)) throw ArgumentError("OU theta must lie in (0, 1)");
  for (double s : sigmas_) {
    if (s < 0.0) throw ArgumentError("OU sigma must be non-negative");
  }
}

std::span<const double> OuNoise::step(Rng& rng) {
  for (std::size_t c = 0; c < state_.size(); ++c) {
    state_[c] = (1.0 - theta_) * state_[c] + normal(rng, sigmas_[c]);
  }
  return state_;
}

void OuNoise::reset() { std::fill(state_.begin(), state_.end(), 0.0); }

double OuNoise::stationary_std(double theta, double sigma) {
  const double decay = 1.0 - theta;
  return sigma / std::sqrt(1.0 - decay * decay);
}

PerceptionNoise::PerceptionNoise(PerceptionNoiseConfig config)
    : config_(config),
      velocity_(config.theta, std::vector<double>(3, config.enabled ? config.velocity_sigma : 0.0)),
      direction_(config.theta, std::vector<double>(3, config.enabled ? config.direction_sigma : 0.0)),
      altitude_(config.theta, std::vector<double>(1, config.enabled ? config.altitude_sigma : 0.0)) {}

PerceptionOffsets PerceptionNoise::step(Rng& rng) {
  PerceptionOffsets out;
  const auto v = velocity_.step(rng);
  const auto d = direction_.step(rng);
  const auto z = altitude_.step(rng);
  out.velocity = {v[0], v[1], v[2]};
  out.direction = {d[0], d[1], d[2]};
  out.altitude = z[0];
  return out;
}

void PerceptionNoise::reset() {
  velocity_.reset();
  direction_.reset();
  altitude_.reset();
}

}  // namespace gsnav
