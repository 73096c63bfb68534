#include "gsnav/domain_adapt.hpp"

#include <algorithm>
#include <cmath>

#include "gsnav/errors.hpp"

namespace gsnav {

Eigen::MatrixXd grl_backward(const Eigen::MatrixXd& upstream, double lambda) {
  if (lambda < 0.0) throw ArgumentError("gradient reversal lambda must be >= 0");
  return -lambda * upstream;
}

namespace {

double clamp_d(double d) { return std::clamp(d, kDaClamp, 1.0 - kDaClamp); }

void check_batches(const Eigen::VectorXd& s, const Eigen::VectorXd& t) {
  if (s.size() == 0 || t.size() == 0) throw ArgumentError("domain loss needs samples from both domains");
}

std::vector<double> weighted_sum(const std::vector<double>& a, const std::vector<double>& b,
                                 double wa, double wb) {
  const std::size_t n = std::max(a.size(), b.size());
  if (!a.empty() && !b.empty() && a.size() != b.size()) {
    throw ArgumentError("total_loss: gradient groups differ in size");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double va = a.empty() ? 0.0 : a[i];
    const double vb = b.empty() ? 0.0 : b[i];
    out[i] = wa * va + wb * vb;
  }
  return out;
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

double da_loss(const Eigen::VectorXd& d_source, const Eigen::VectorXd& d_target) {
  check_batches(d_source, d_target);
  double ls = 0.0;
  for (Eigen::Index i = 0; i < d_source.size(); ++i) ls -= std::log(clamp_d(d_source[i]));
  double lt = 0.0;
  for (Eigen::Index i = 0; i < d_target.size(); ++i) lt -= std::log(1.0 - clamp_d(d_target[i]));
  return ls / static_cast<double>(d_source.size()) + lt / static_cast<double>(d_target.size());
}

void da_loss_grad(const Eigen::VectorXd& d_source, const Eigen::VectorXd& d_target,
                  Eigen::VectorXd& grad_source, Eigen::VectorXd& grad_target) {
  check_batches(d_source, d_target);
  const double ns = static_cast<double>(d_source.size());
  const double nt = static_cast<double>(d_target.size());
  grad_source.resize(d_source.size());
  grad_target.resize(d_target.size());
  for (Eigen::Index i = 0; i < d_source.size(); ++i) {
    const double d = d_source[i];
    grad_source[i] = (d > kDaClamp && d < 1.0 - kDaClamp) ? -1.0 / (ns * d) : 0.0;
  }
  for (Eigen::Index i = 0; i < d_target.size(); ++i) {
    const double d = d_target[i];
    grad_target[i] = (d > kDaClamp && d < 1.0 - kDaClamp) ? 1.0 / (nt * (1.0 - d)) : 0.0;
  }
}

LossGrad total_loss(const LossGrad& task, const LossGrad& da, double lambda1, double lambda2) {
  LossGrad out;
  out.value = lambda1 * task.value + lambda2 * da.value;
  out.grads.encoder = weighted_sum(task.grads.encoder, da.grads.encoder, lambda1, lambda2);
  out.grads.discriminator =
      weighted_sum(task.grads.discriminator, da.grads.discriminator, lambda1, lambda2);
  out.grads.head = weighted_sum(task.grads.head, da.grads.head, lambda1, lambda2);
  return out;
}

void DaConfig::validate() const {
  if (feature_dim <= 0) throw ConfigError("da feature dimension must be positive");
  for (int h : encoder_hidden) {
    if (h <= 0) throw ConfigError("da encoder layer sizes must be positive");
  }
  for (int h : discriminator_hidden) {
    if (h <= 0) throw ConfigError("da discriminator layer sizes must be positive");
  }
  if (lambda_grl < 0.0) throw ConfigError("da lambda must be >= 0");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw ConfigError("da loss weights must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("da learning rate must be positive");
  if (!(discriminator_learning_rate > 0.0)) {
    throw ConfigError("da discriminator learning rate must be positive");
  }
}

DaNetwork::DaNetwork(int input_dim, int target_dim, DaConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  config_.validate();
  Rng rng = make_rng(seed, "da.init");
  encoder_ = Mlp(layer_sizes(input_dim, config_.encoder_hidden, config_.feature_dim),
                 Activation::tanh, Activation::tanh, rng);
  discriminator_ = Mlp(layer_sizes(config_.feature_dim, config_.discriminator_hidden, 1),
                       Activation::tanh, Activation::sigmoid, rng);
  head_ = Mlp({config_.feature_dim, target_dim}, Activation::identity, Activation::identity, rng);
}

void DaNetwork::set_lambda_grl(double lambda) {
  if (lambda < 0.0) throw ArgumentError("gradient reversal lambda must be >= 0");
  config_.lambda_grl = lambda;
}

Eigen::VectorXd DaNetwork::discriminate(const Eigen::MatrixXd& x) const {
  return discriminator_.infer(encoder_.infer(x)).col(0);
}

Eigen::MatrixXd DaNetwork::predict(const Eigen::MatrixXd& x) const {
  return head_.infer(encoder_.infer(x));
}

LossGrad DaNetwork::da_branch(const Eigen::MatrixXd& x_source, const Eigen::MatrixXd& x_target,
                              bool reverse) {
  const Eigen::Index ns = x_source.rows();
  Eigen::MatrixXd x(ns + x_target.rows(), x_source.cols());
  x << x_source, x_target;

  encoder_.zero_grad();
  discriminator_.zero_grad();
  head_.zero_grad();

  const Eigen::MatrixXd z = encoder_.forward(x);
  const Eigen::VectorXd d = discriminator_.forward(grl_forward(z)).col(0);
  const Eigen::VectorXd ds = d.head(ns);
  const Eigen::VectorXd dt = d.tail(x_target.rows());

  LossGrad out;
  out.value = da_loss(ds, dt);
  Eigen::VectorXd gs, gt;
  da_loss_grad(ds, dt, gs, gt);
  Eigen::MatrixXd gd(d.size(), 1);
  gd << gs, gt;
  const Eigen::MatrixXd gz = discriminator_.backward(gd);
  encoder_.backward(reverse ? grl_backward(gz, config_.lambda_grl) : gz);

  out.grads.encoder = encoder_.gradients();
  out.grads.discriminator = discriminator_.gradients();
  out.grads.head = std::vector<double>(head_.parameter_count(), 0.0);
  return out;
}

LossGrad DaNetwork::task_branch(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (y.rows() != x.rows() || y.cols() != head_.output_size()) {
    throw ArgumentError("task targets must have one row per input and match the head width");
  }
  encoder_.zero_grad();
  discriminator_.zero_grad();
  head_.zero_grad();

  const Eigen::MatrixXd z = encoder_.forward(x);
  const Eigen::MatrixXd pred = head_.forward(z);
  const Eigen::MatrixXd diff = pred - y;
  const double n = static_cast<double>(diff.size());
  LossGrad out;
  out.value = diff.squaredNorm() / n;
  const Eigen::MatrixXd gz = head_.backward(2.0 * diff / n);
  encoder_.backward(gz);
  out.grads.encoder = encoder_.gradients();
  out.grads.discriminator = std::vector<double>(discriminator_.parameter_count(), 0.0);
  out.grads.head = head_.gradients();
  return out;
}

LossGrad DaNetwork::task_branch(const Eigen::MatrixXd& x, const TaskLoss& loss) {
  encoder_.zero_grad();
  discriminator_.zero_grad();
  head_.zero_grad();
  const Eigen::MatrixXd z = encoder_.forward(x);
  Eigen::MatrixXd gz = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  LossGrad out;
  out.value = loss(z, gz);
  if (gz.rows() != z.rows() || gz.cols() != z.cols()) {
    throw ArgumentError("task loss hook returned a gradient of the wrong shape");
  }
  encoder_.backward(gz);
  out.grads.encoder = encoder_.gradients();
  out.grads.discriminator = std::vector<double>(discriminator_.parameter_count(), 0.0);
  out.grads.head = std::vector<double>(head_.parameter_count(), 0.0);
  return out;
}

void apply_flat(Mlp& net, const std::vector<double>& grads, double learning_rate) {
  std::vector<double> p = net.parameters();
  if (grads.size() != p.size()) throw ArgumentError("gradient size does not match the network");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * grads[i];
  net.set_parameters(p);
}

void DaNetwork::apply(const ParamGrads& grads) {
  apply(grads, config_.learning_rate, config_.discriminator_learning_rate);
}

void DaNetwork::apply(const ParamGrads& grads, double learning_rate,
                      double discriminator_learning_rate) {
  apply_flat(encoder_, grads.encoder, learning_rate);
  apply_flat(discriminator_, grads.discriminator, discriminator_learning_rate);
  apply_flat(head_, grads.head, learning_rate);
}

Eigen::Vector3d DaNetwork::train_step(const Eigen::MatrixXd& x_source, const Eigen::MatrixXd& y_source,
                                      const Eigen::MatrixXd& x_target) {
  const LossGrad task = task_branch(x_source, y_source);
  const LossGrad da = da_branch(x_source, x_target, true);
  const LossGrad total = total_loss(task, da, config_.lambda1, config_.lambda2);
  if (!std::isfinite(total.value)) throw SimulationFault("domain adaptation loss became non-finite");
  apply(total.grads);
  return {total.value, task.value, da.value};
}

}  // namespace gsnav
