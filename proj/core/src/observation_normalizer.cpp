#include "gsnav/observation_normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "gsnav/errors.hpp"

namespace gsnav {

ObservationNormalizer::ObservationNormalizer(std::size_t channels, double epsilon, double clip)
    : epsilon_(epsilon), clip_(clip), mean_(channels, 0.0), m2_(channels, 0.0) {
  if (channels == 0) throw ArgumentError("normalizer needs at least one channel");
  if (!(epsilon > 0.0) || !(clip > 0.0)) throw ArgumentError("normalizer epsilon and clip must be positive");
}

void ObservationNormalizer::update(std::span<const double> x) {
  if (x.size() != mean_.size()) throw ArgumentError("normalizer: channel count mismatch");
  if (frozen_) return;
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double delta = x[c] - mean_[c];
    mean_[c] += delta / n;
    m2_[c] += delta * (x[c] - mean_[c]);
  }
}

std::vector<double> ObservationNormalizer::variance() const {
  std::vector<double> var(mean_.size(), 0.0);
  if (count_ < 2) return var;
  for (std::size_t c = 0; c < var.size(); ++c) var[c] = m2_[c] / static_cast<double>(count_);
  return var;
}

std::vector<double> ObservationNormalizer::normalize(std::span<const double> x) const {
  if (x.size() != mean_.size()) throw ArgumentError("normalizer: channel count mismatch");
  const std::vector<double> var = variance();
  std::vector<double> out(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double z = (x[c] - mean_[c]) / std::sqrt(var[c] + epsilon_);
    out[c] = std::clamp(z, -clip_, clip_);
  }
  return out;
}

}  // namespace gsnav
