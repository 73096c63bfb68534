#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gsnav {

/// Per-channel running mean / variance (Welford) used to standardize state
/// vectors. Images are scaled to [0, 1] by the renderer and pass through.
class ObservationNormalizer {
 public:
  explicit ObservationNormalizer(std::size_t channels, double epsilon = 1e-8, double clip = 10.0);

  void update(std::span<const double> x);
  /// (x - mean) / sqrt(var + epsilon), clipped to [-clip, clip].
  std::vector<double> normalize(std::span<const double> x) const;

  void freeze() { frozen_ = true; }
  void unfreeze() { frozen_ = false; }
  bool frozen() const { return frozen_; }

  std::size_t channels() const { return mean_.size(); }
  std::size_t count() const { return count_; }
  std::span<const double> mean() const { return mean_; }
  /// Population variance; zero before two samples.
  std::vector<double> variance() const;

 private:
  double epsilon_;
  double clip_;
  bool frozen_ = false;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace gsnav
