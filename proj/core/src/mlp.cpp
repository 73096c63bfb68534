#include "gsnav/mlp.hpp"

#include <cmath>

#include "gsnav/errors.hpp"

namespace gsnav {

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& pre, Activation act) {
  switch (act) {
    case Activation::identity: return pre;
    case Activation::tanh: return pre.array().tanh().matrix();
    case Activation::sigmoid: return (1.0 / (1.0 + (-pre.array()).exp())).matrix();
  }
  return pre;
}

/// Derivative of the activation expressed through its output.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& out, Activation act) {
  switch (act) {
    case Activation::identity: return Eigen::MatrixXd::Ones(out.rows(), out.cols());
    case Activation::tanh: return (1.0 - out.array().square()).matrix();
    case Activation::sigmoid: return (out.array() * (1.0 - out.array())).matrix();
  }
  return Eigen::MatrixXd::Ones(out.rows(), out.cols());
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes, Activation hidden, Activation output, Rng& rng) {
  if (sizes.size() < 2) throw ArgumentError("mlp needs at least an input and an output size");
  for (int s : sizes) {
    if (s <= 0) throw ArgumentError("mlp layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    layer.weight.resize(out, in);
    for (int c = 0; c < in; ++c) {
      for (int r = 0; r < out; ++r) layer.weight(r, c) = uniform(rng, -limit, limit);
    }
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.activation = l + 2 == sizes.size() ? output : hidden;
    layer.weight_grad = Eigen::MatrixXd::Zero(out, in);
    layer.bias_grad = Eigen::VectorXd::Zero(out);
    layers_.push_back(std::move(layer));
  }
}

int Mlp::input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
int Mlp::output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) {
  if (x.cols() != input_size()) throw ArgumentError("mlp forward: input width mismatch");
  inputs_.assign(layers_.size(), {});
  outputs_.assign(layers_.size(), {});
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    inputs_[l] = h;
    Eigen::MatrixXd pre = h * layer.weight.transpose();
    pre.rowwise() += layer.bias.transpose();
    h = activate(pre, layer.activation);
    outputs_[l] = h;
  }
  return h;
}

Eigen::MatrixXd Mlp::infer(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_size()) throw ArgumentError("mlp infer: input width mismatch");
  Eigen::MatrixXd h = x;
  for (const DenseLayer& layer : layers_) {
    Eigen::MatrixXd pre = h * layer.weight.transpose();
    pre.rowwise() += layer.bias.transpose();
    h = activate(pre, layer.activation);
  }
  return h;
}

Eigen::MatrixXd Mlp::backward(const Eigen::MatrixXd& grad_output) {
  if (outputs_.size() != layers_.size() || layers_.empty()) {
    throw ArgumentError("mlp backward called before forward");
  }
  if (grad_output.rows() != outputs_.back().rows() || grad_output.cols() != output_size()) {
    throw ArgumentError("mlp backward: gradient shape mismatch");
  }
  Eigen::MatrixXd g = grad_output;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    DenseLayer& layer = layers_[l];
    const Eigen::MatrixXd g_pre = (g.array() * activation_slope(outputs_[l], layer.activation).array()).matrix();
    layer.weight_grad += g_pre.transpose() * inputs_[l];
    layer.bias_grad += g_pre.colwise().sum().transpose();
    g = g_pre * layer.weight;
  }
  return g;
}

void Mlp::zero_grad() {
  for (DenseLayer& layer : layers_) {
    layer.weight_grad.setZero();
    layer.bias_grad.setZero();
  }
}

void Mlp::sgd_step(double lr) {
  for (DenseLayer& layer : layers_) {
    layer.weight -= lr * layer.weight_grad;
    layer.bias -= lr * layer.bias_grad;
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& layer : layers_) n += layer.weight.size() + layer.bias.size();
  return n;
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (const DenseLayer& layer : layers_) {
    p.insert(p.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    p.insert(p.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return p;
}

void Mlp::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) throw ArgumentError("mlp set_parameters: size mismatch");
  std::size_t k = 0;
  for (DenseLayer& layer : layers_) {
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = values[k++];
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = values[k++];
  }
}

std::vector<double> Mlp::gradients() const {
  std::vector<double> g;
  g.reserve(parameter_count());
  for (const DenseLayer& layer : layers_) {
    g.insert(g.end(), layer.weight_grad.data(), layer.weight_grad.data() + layer.weight_grad.size());
    g.insert(g.end(), layer.bias_grad.data(), layer.bias_grad.data() + layer.bias_grad.size());
  }
  return g;
}

}  // namespace gsnav
