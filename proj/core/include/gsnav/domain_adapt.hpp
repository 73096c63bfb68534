#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gsnav/mlp.hpp"

namespace gsnav {

/// Gradient reversal: identity forward, -lambda * upstream backward.
inline const Eigen::MatrixXd& grl_forward(const Eigen::MatrixXd& x) { return x; }
Eigen::MatrixXd grl_backward(const Eigen::MatrixXd& upstream, double lambda);

inline constexpr double kDaClamp = 1e-7;

/// Batch-mean BCE with source as the positive class:
/// -mean(log D(z_s)) - mean(log(1 - D(z_t))), outputs clamped to [1e-7, 1 - 1e-7].
double da_loss(const Eigen::VectorXd& d_source, const Eigen::VectorXd& d_target);

/// dL/dD for each output; zero where the clamp is active.
void da_loss_grad(const Eigen::VectorXd& d_source, const Eigen::VectorXd& d_target,
                  Eigen::VectorXd& grad_source, Eigen::VectorXd& grad_target);

/// Flattened gradients of every parameter group of a DaNetwork.
struct ParamGrads {
  std::vector<double> encoder;
  std::vector<double> discriminator;
  std::vector<double> head;
};

struct LossGrad {
  double value = 0.0;
  ParamGrads grads;
};

/// lambda1 * task + lambda2 * da, applied to the value and elementwise to
/// every gradient group. Groups missing from one side count as zeros.
LossGrad total_loss(const LossGrad& task, const LossGrad& da, double lambda1, double lambda2);

struct DaConfig {
  std::vector<int> encoder_hidden{256};
  int feature_dim = 64;
  std::vector<int> discriminator_hidden{32};
  double lambda_grl = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double learning_rate = 0.005;  ///< encoder and task head
  double discriminator_learning_rate = 1.0;

  void validate() const;
};

/// Task loss on encoder features: returns the loss and writes dL/d(features).
using TaskLoss = std::function<double(const Eigen::MatrixXd& features, Eigen::MatrixXd& grad_features)>;

/// Encoder (tanh MLP), discriminator (tanh hidden, sigmoid output) and a
/// linear regression head that serves as the default task.
class DaNetwork {
 public:
  DaNetwork(int input_dim, int target_dim, DaConfig config, std::uint64_t seed);

  Eigen::MatrixXd features(const Eigen::MatrixXd& x) const { return encoder_.infer(x); }
  Eigen::VectorXd discriminate(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const;

  /// Adversarial branch. Discriminator gradients are those of L_DA; encoder
  /// gradients pass through the reversal layer (times -lambda_grl).
  LossGrad da_branch(const Eigen::MatrixXd& x_source, const Eigen::MatrixXd& x_target,
                     bool reverse = true);
  /// Mean squared error of the head on (x, y).
  LossGrad task_branch(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
  /// Arbitrary task loss on encoder features (head untouched).
  LossGrad task_branch(const Eigen::MatrixXd& x, const TaskLoss& loss);

  /// One joint SGD step on all parameter groups with the configured rates.
  void apply(const ParamGrads& grads);
  void apply(const ParamGrads& grads, double learning_rate, double discriminator_learning_rate);
  /// Computes the weighted joint loss on one batch and applies it. Returns (total, task, da).
  Eigen::Vector3d train_step(const Eigen::MatrixXd& x_source, const Eigen::MatrixXd& y_source,
                             const Eigen::MatrixXd& x_target);

  const DaConfig& config() const { return config_; }
  void set_lambda_grl(double lambda);
  Mlp& encoder() { return encoder_; }
  Mlp& discriminator() { return discriminator_; }
  Mlp& head() { return head_; }

 private:
  DaConfig config_;
  Mlp encoder_;
  Mlp discriminator_;
  Mlp head_;
};

void apply_flat(Mlp& net, const std::vector<double>& grads, double learning_rate);

}  // namespace gsnav
