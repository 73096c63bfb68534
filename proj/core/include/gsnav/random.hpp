#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gsnav {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named subsystem stream ("scene",
/// "dynamics", "env", "da", ...). The same (seed, stream, index) triple
/// always produces the same value, so per-environment streams do not depend
/// on batch order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double normal(Rng& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace gsnav
