#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gsnav/random.hpp"

namespace gsnav {

enum class Activation { identity, tanh, sigmoid };

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::tanh;
  Eigen::MatrixXd weight_grad;
  Eigen::VectorXd bias_grad;
};

/// Fully connected network over row-major batches (one sample per row) with
/// hand-written backprop. Gradients accumulate until zero_grad().
class Mlp {
 public:
  Mlp() = default;
  /// Xavier-uniform weights, zero biases. `sizes` = {in, hidden..., out}.
  Mlp(std::vector<int> sizes, Activation hidden, Activation output, Rng& rng);

  /// Forward pass that caches activations for backward().
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x);
  /// Forward pass without caching.
  Eigen::MatrixXd infer(const Eigen::MatrixXd& x) const;
  /// Accumulates parameter gradients for dL/d(output) of the last forward()
  /// and returns dL/d(input).
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

  void zero_grad();
  /// p -= lr * grad for every parameter.
  void sgd_step(double lr);

  std::size_t parameter_count() const;
  /// Flattened as layer by layer: weight (column-major), then bias.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);
  std::vector<double> gradients() const;

  int input_size() const;
  int output_size() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  std::vector<DenseLayer> layers_;
  std::vector<Eigen::MatrixXd> inputs_;   ///< cached input of each layer
  std::vector<Eigen::MatrixXd> outputs_;  ///< cached post-activation output of each layer
};

}  // namespace gsnav
