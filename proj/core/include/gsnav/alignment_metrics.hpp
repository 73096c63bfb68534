#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace gsnav {

/// Fraction of rows whose Euclidean nearest neighbour (self excluded, ties
/// to the lower index) carries the same label.
double gsi(const Eigen::MatrixXd& features, std::span<const int> labels, unsigned threads = 0);

struct ProbeOptions {
  double train_fraction = 0.7;
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// Held-out accuracy of a multinomial logistic regression trained by full
/// batch gradient descent on the raw features, using a seeded shuffle split.
double probe_accuracy(const Eigen::MatrixXd& features, std::span<const int> labels,
                      const ProbeOptions& options = {});

}  // namespace gsnav
