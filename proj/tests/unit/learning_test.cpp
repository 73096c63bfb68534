#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gsnav/alignment_metrics.hpp"
#include "gsnav/da_demo.hpp"
#include "gsnav/domain_adapt.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/feature_dump.hpp"
#include "gsnav/mlp.hpp"
#include "gsnav/random.hpp"

namespace gsnav {
namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed, double sigma = 1.0) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng, sigma);
  }
  return m;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Central differences of `loss` over the parameters of `net`.
template <class F>
std::vector<double> numeric_grad(Mlp& net, F loss, double h = 1e-5) {
  std::vector<double> p = net.parameters();
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + h;
    net.set_parameters(p);
    const double up = loss();
    p[i] = keep - h;
    net.set_parameters(p);
    const double down = loss();
    p[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  net.set_parameters(p);
  return g;
}

TEST(Mlp, ShapesAndParameterCount) {
  Rng rng(1);
  Mlp net({5, 7, 3}, Activation::tanh, Activation::identity, rng);
  EXPECT_EQ(net.input_size(), 5);
  EXPECT_EQ(net.output_size(), 3);
  EXPECT_EQ(net.parameter_count(), 5u * 7 + 7 + 7 * 3 + 3);
  const Eigen::MatrixXd y = net.infer(random_matrix(4, 5, 2));
  EXPECT_EQ(y.rows(), 4);
  EXPECT_EQ(y.cols(), 3);
}

TEST(Mlp, XavierBoundsAndZeroBias) {
  Rng rng(2);
  Mlp net({10, 30}, Activation::tanh, Activation::tanh, rng);
  const double bound = std::sqrt(6.0 / 40.0);
  EXPECT_LE(net.layers()[0].weight.cwiseAbs().maxCoeff(), bound);
  EXPECT_EQ(net.layers()[0].bias.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  for (Activation out : {Activation::identity, Activation::tanh, Activation::sigmoid}) {
    Rng rng(3);
    Mlp net({4, 6, 5, 2}, Activation::tanh, out, rng);
    // Non-zero biases so every path is exercised.
    std::vector<double> p = net.parameters();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += 0.05 * std::sin(1.0 + i);
    net.set_parameters(p);
    const Eigen::MatrixXd x = random_matrix(7, 4, 4);
    const Eigen::MatrixXd w = random_matrix(7, 2, 5);
    auto loss = [&] { return (net.infer(x).array() * w.array()).sum(); };
    net.zero_grad();
    net.forward(x);
    const Eigen::MatrixXd gx = net.backward(w);
    const std::vector<double> analytic = net.gradients();
    const std::vector<double> numeric = numeric_grad(net, loss);
    for (std::size_t i = 0; i < analytic.size(); ++i) EXPECT_LT(rel_err(analytic[i], numeric[i]), 1e-6) << i;

    const double h = 1e-5;
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 4; ++c) {
        Eigen::MatrixXd xp = x, xm = x;
        xp(r, c) += h;
        xm(r, c) -= h;
        const double fd = ((net.infer(xp).array() * w.array()).sum() - (net.infer(xm).array() * w.array()).sum()) / (2 * h);
        EXPECT_LT(rel_err(gx(r, c), fd), 1e-6);
      }
    }
  }
}

TEST(Mlp, GradientsAccumulateUntilZeroed) {
  Rng rng(4);
  Mlp net({3, 2}, Activation::tanh, Activation::identity, rng);
  const Eigen::MatrixXd x = random_matrix(2, 3, 6);
  const Eigen::MatrixXd g = Eigen::MatrixXd::Ones(2, 2);
  net.zero_grad();
  net.forward(x);
  net.backward(g);
  const std::vector<double> once = net.gradients();
  net.forward(x);
  net.backward(g);
  const std::vector<double> twice = net.gradients();
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_NEAR(twice[i], 2 * once[i], 1e-12);
  net.zero_grad();
  for (double v : net.gradients()) EXPECT_EQ(v, 0.0);
}

TEST(Mlp, SgdStep) {
  Rng rng(5);
  Mlp net({2, 2}, Activation::identity, Activation::identity, rng);
  const std::vector<double> before = net.parameters();
  net.zero_grad();
  net.forward(Eigen::MatrixXd::Ones(1, 2));
  net.backward(Eigen::MatrixXd::Ones(1, 2));
  const std::vector<double> g = net.gradients();
  net.sgd_step(0.1);
  const std::vector<double> after = net.parameters();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(after[i], before[i] - 0.1 * g[i], 1e-15);
}

TEST(Grl, ForwardIdentityBackwardNegated) {
  const Eigen::MatrixXd x = random_matrix(3, 4, 7);
  EXPECT_EQ(&grl_forward(x), &x);
  const Eigen::MatrixXd g = grl_backward(x, 0.7);
  EXPECT_LT((g + 0.7 * x).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(grl_backward(x, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DaLoss, ValueAndClamp) {
  Eigen::VectorXd s(2), t(2);
  s << 0.9, 0.6;
  t << 0.2, 0.5;
  const double expected = -(std::log(0.9) + std::log(0.6)) / 2 - (std::log(0.8) + std::log(0.5)) / 2;
  EXPECT_NEAR(da_loss(s, t), expected, 1e-14);
  Eigen::VectorXd one(1), zero(1);
  one << 1.0;
  zero << 0.0;
  EXPECT_NEAR(da_loss(zero, one), -2 * std::log(kDaClamp), 1e-9);
  Eigen::VectorXd gs, gt;
  da_loss_grad(zero, one, gs, gt);
  EXPECT_EQ(gs[0], 0.0);
  EXPECT_EQ(gt[0], 0.0);
}

TEST(DaLoss, GradientMatchesFiniteDifferences) {
  Eigen::VectorXd s(3), t(2);
  s << 0.3, 0.7, 0.55;
  t << 0.4, 0.1;
  Eigen::VectorXd gs, gt;
  da_loss_grad(s, t, gs, gt);
  const double h = 1e-7;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd p = s, m = s;
    p[i] += h;
    m[i] -= h;
    EXPECT_NEAR(gs[i], (da_loss(p, t) - da_loss(m, t)) / (2 * h), 1e-5);
  }
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd p = t, m = t;
    p[i] += h;
    m[i] -= h;
    EXPECT_NEAR(gt[i], (da_loss(s, p) - da_loss(s, m)) / (2 * h), 1e-5);
  }
}

DaConfig small_config() {
  DaConfig c;
  c.encoder_hidden = {6};
  c.feature_dim = 4;
  c.discriminator_hidden = {5};
  c.lambda_grl = 0.8;
  return c;
}

TEST(DaNetwork, AdversarialGradientsMatchFiniteDifferences) {
  DaNetwork net(3, 2, small_config(), 11);
  const Eigen::MatrixXd xs = random_matrix(6, 3, 12);
  const Eigen::MatrixXd xt = random_matrix(5, 3, 13, 1.5);
  auto loss = [&] { return da_loss(net.discriminate(xs), net.discriminate(xt)); };

  const LossGrad plain = net.da_branch(xs, xt, false);
  EXPECT_NEAR(plain.value, loss(), 1e-12);
  const std::vector<double> enc_fd = numeric_grad(net.encoder(), loss);
  const std::vector<double> disc_fd = numeric_grad(net.discriminator(), loss);
  ASSERT_EQ(plain.grads.encoder.size(), enc_fd.size());
  for (std::size_t i = 0; i < enc_fd.size(); ++i) EXPECT_LT(rel_err(plain.grads.encoder[i], enc_fd[i]), 1e-4);
  for (std::size_t i = 0; i < disc_fd.size(); ++i) EXPECT_LT(rel_err(plain.grads.discriminator[i], disc_fd[i]), 1e-4);

  const LossGrad reversed = net.da_branch(xs, xt, true);
  for (std::size_t i = 0; i < enc_fd.size(); ++i) {
    EXPECT_NEAR(reversed.grads.encoder[i], -0.8 * plain.grads.encoder[i], 1e-12);
  }
  for (std::size_t i = 0; i < disc_fd.size(); ++i) {
    EXPECT_EQ(reversed.grads.discriminator[i], plain.grads.discriminator[i]);
  }
}

TEST(DaNetwork, TaskGradientsMatchFiniteDifferences) {
  DaNetwork net(3, 2, small_config(), 21);
  const Eigen::MatrixXd x = random_matrix(8, 3, 22);
  const Eigen::MatrixXd y = random_matrix(8, 2, 23);
  auto loss = [&] {
    const Eigen::MatrixXd d = net.predict(x) - y;
    return d.squaredNorm() / static_cast<double>(d.size());
  };
  const LossGrad g = net.task_branch(x, y);
  EXPECT_NEAR(g.value, loss(), 1e-12);
  const std::vector<double> enc = numeric_grad(net.encoder(), loss);
  const std::vector<double> head = numeric_grad(net.head(), loss);
  for (std::size_t i = 0; i < enc.size(); ++i) EXPECT_LT(rel_err(g.grads.encoder[i], enc[i]), 1e-4);
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_LT(rel_err(g.grads.head[i], head[i]), 1e-4);
  for (double v : g.grads.discriminator) EXPECT_EQ(v, 0.0);
}

TEST(DaNetwork, CustomTaskLoss) {
  DaNetwork net(3, 1, small_config(), 31);
  const Eigen::MatrixXd x = random_matrix(5, 3, 32);
  const TaskLoss sum_sq = [](const Eigen::MatrixXd& z, Eigen::MatrixXd& g) {
    g = 2 * z;
    return z.squaredNorm();
  };
  auto loss = [&] { return net.features(x).squaredNorm(); };
  const LossGrad g = net.task_branch(x, sum_sq);
  EXPECT_NEAR(g.value, loss(), 1e-12);
  const std::vector<double> enc = numeric_grad(net.encoder(), loss);
  for (std::size_t i = 0; i < enc.size(); ++i) EXPECT_LT(rel_err(g.grads.encoder[i], enc[i]), 1e-4);
}

TEST(TotalLoss, LinearInWeights) {
  LossGrad task{2.0, {{1.0, -1.0}, {}, {0.5}}};
  LossGrad da{3.0, {{0.25, 0.5}, {4.0}, {}}};
  const LossGrad t = total_loss(task, da, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(t.value, 7.0);
  ASSERT_EQ(t.grads.encoder.size(), 2u);
  EXPECT_DOUBLE_EQ(t.grads.encoder[0], 1.0);
  EXPECT_DOUBLE_EQ(t.grads.encoder[1], 0.5);
  ASSERT_EQ(t.grads.discriminator.size(), 1u);
  EXPECT_DOUBLE_EQ(t.grads.discriminator[0], 8.0);
  ASSERT_EQ(t.grads.head.size(), 1u);
  EXPECT_DOUBLE_EQ(t.grads.head[0], 0.25);
  const LossGrad only_task = total_loss(task, da, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(only_task.value, 2.0);
  EXPECT_DOUBLE_EQ(only_task.grads.discriminator[0], 0.0);
}

TEST(DaConfig, Validation) {
  DaConfig c;
  c.feature_dim = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DaConfig{};
  c.learning_rate = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

// -- alignment metrics ---------------------------------------------------------

TEST(Gsi, SeparatedClustersScoreOne) {
  Eigen::MatrixXd z = random_matrix(200, 3, 41, 0.1);
  std::vector<int> labels(200, 0);
  for (int i = 100; i < 200; ++i) {
    z(i, 0) += 10.0;
    labels[i] = 1;
  }
  EXPECT_DOUBLE_EQ(gsi(z, labels), 1.0);
}

TEST(Gsi, MixedLabelsNearHalf) {
  const Eigen::MatrixXd z = random_matrix(2000, 3, 42);
  std::vector<int> labels(2000);
  Rng rng(43);
  for (auto& l : labels) l = static_cast<int>(rng() & 1u);
  EXPECT_NEAR(gsi(z, labels), 0.5, 0.04);
}

TEST(Gsi, AlternatingLineScoresZero) {
  Eigen::MatrixXd z(10, 1);
  std::vector<int> labels(10);
  for (int i = 0; i < 10; ++i) {
    z(i, 0) = i;
    labels[i] = i % 2;
  }
  EXPECT_DOUBLE_EQ(gsi(z, labels), 0.0);
}

TEST(Gsi, TiesGoToLowerIndex) {
  Eigen::MatrixXd z(3, 1);
  z << 0.0, -1.0, 1.0;
  const std::vector<int> labels = {0, 0, 1};
  // Row 0 is equidistant from rows 1 and 2 and picks row 1; row 2 mismatches.
  EXPECT_NEAR(gsi(z, labels), 2.0 / 3.0, 1e-15);
}

TEST(Gsi, ThreadCountDoesNotMatter) {
  const Eigen::MatrixXd z = random_matrix(300, 4, 44);
  std::vector<int> labels(300);
  for (int i = 0; i < 300; ++i) labels[i] = i % 3;
  EXPECT_EQ(gsi(z, labels, 1), gsi(z, labels, 4));
}

TEST(Gsi, RejectsBadInput) {
  const Eigen::MatrixXd z = random_matrix(3, 2, 45);
  const std::vector<int> two = {0, 1};
  EXPECT_THROW(gsi(z, two), ArgumentError);
}

TEST(Probe, SeparableIsAccurate) {
  Eigen::MatrixXd z = random_matrix(400, 2, 46, 0.3);
  std::vector<int> labels(400, 0);
  for (int i = 200; i < 400; ++i) {
    z(i, 1) += 3.0;
    labels[i] = 1;
  }
  EXPECT_GE(probe_accuracy(z, labels), 0.98);
}

TEST(Probe, RandomLabelsAtChance) {
  const Eigen::MatrixXd z = random_matrix(2000, 4, 47);
  std::vector<int> labels(2000);
  Rng rng(48);
  for (auto& l : labels) l = static_cast<int>(rng() & 1u);
  EXPECT_NEAR(probe_accuracy(z, labels), 0.5, 0.05);
}

TEST(Probe, Deterministic) {
  const Eigen::MatrixXd z = random_matrix(300, 3, 49);
  std::vector<int> labels(300);
  for (int i = 0; i < 300; ++i) labels[i] = (z(i, 0) + 0.3 * z(i, 2) > 0) ? 1 : 0;
  ProbeOptions o;
  o.seed = 5;
  EXPECT_EQ(probe_accuracy(z, labels, o), probe_accuracy(z, labels, o));
}

// -- feature dumps -------------------------------------------------------------

TEST(FeatureDump, RoundTrip) {
  const auto dir = testing::scratch_dir("dump");
  const Eigen::MatrixXd f = random_matrix(17, 5, 51);
  std::vector<std::uint8_t> labels(17);
  for (int i = 0; i < 17; ++i) labels[i] = static_cast<std::uint8_t>(i % 4);
  write_feature_dump(dir / "f.bin", f, labels);
  EXPECT_EQ(std::filesystem::file_size(dir / "f.bin"), 16u + 17 * 5 * 4 + 17);
  const FeatureDump d = read_feature_dump(dir / "f.bin");
  ASSERT_EQ(d.features.rows(), 17);
  ASSERT_EQ(d.features.cols(), 5);
  EXPECT_EQ(d.labels, labels);
  for (int r = 0; r < 17; ++r) {
    for (int c = 0; c < 5; ++c) EXPECT_EQ(d.features(r, c), static_cast<double>(static_cast<float>(f(r, c))));
  }
}

TEST(FeatureDump, Errors) {
  const auto dir = testing::scratch_dir("dump_err");
  EXPECT_THROW(read_feature_dump(dir / "missing.bin"), LoadError);
  const Eigen::MatrixXd f = random_matrix(4, 3, 52);
  const std::vector<std::uint8_t> labels(4, 1);
  write_feature_dump(dir / "f.bin", f, labels);
  std::filesystem::resize_file(dir / "f.bin", std::filesystem::file_size(dir / "f.bin") - 2);
  EXPECT_THROW(read_feature_dump(dir / "f.bin"), ParseError);
  std::ofstream(dir / "f.bin", std::ios::app) << "xyz";
  EXPECT_THROW(read_feature_dump(dir / "f.bin"), ParseError);
  const std::vector<std::uint8_t> short_labels(3, 0);
  EXPECT_THROW(write_feature_dump(dir / "g.bin", f, short_labels), ArgumentError);
}

// -- two-domain demo -------------------------------------------------------------

TEST(TwoDomainData, ShapesAndOffsetOrthogonality) {
  TwoDomainOptions o;
  o.noise = 0.0;
  o.distortion = 0.0;
  const TwoDomainData d = make_two_domain_data(o, 200, 50, 61);
  EXPECT_EQ(d.train.x_source.rows(), 200);
  EXPECT_EQ(d.train.x_source.cols(), 16);
  EXPECT_EQ(d.test.y_target.cols(), 4);
  // Without noise or distortion the target is the source map plus a fixed offset.
  // Regressing the source split recovers the mixing map exactly.
  const Eigen::MatrixXd mix_t = d.train.y_source.colPivHouseholderQr().solve(d.train.x_source);
  const Eigen::MatrixXd diff = d.train.x_target - d.train.y_target * mix_t;
  const Eigen::RowVectorXd c = diff.row(0);
  EXPECT_LT((diff.rowwise() - c).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(c.norm(), 1.0, 1e-9);
  EXPECT_LT((mix_t * c.transpose()).norm(), 1e-9);
}

TEST(DaDemo, ShortRunReportsEveryEpoch) {
  DaDemoOptions o;
  o.epochs = 3;
  o.train_per_domain = 200;
  o.test_per_domain = 100;
  o.seed = 7;
  const DaDemoReport r = train_da_demo(o);
  EXPECT_FALSE(r.diverged);
  ASSERT_EQ(r.epochs.size(), 4u);
  for (std::size_t i = 0; i < r.epochs.size(); ++i) {
    EXPECT_EQ(r.epochs[i].epoch, static_cast<int>(i));
    EXPECT_GE(r.epochs[i].disc_accuracy, 0.0);
    EXPECT_LE(r.epochs[i].disc_accuracy, 1.0);
    EXPECT_GE(r.epochs[i].gsi, 0.0);
    EXPECT_LE(r.epochs[i].gsi, 1.0);
  }
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.rfind("epoch,L_DA,disc_acc,gsi,probe_acc,task_loss\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(report_csv(train_da_demo(o)), csv);
}

TEST(DaDemo, NonFiniteInputDiverges) {
  DaDemoOptions o;
  o.epochs = 2;
  TwoDomainData d = make_two_domain_data(o.data, 100, 50, 3);
  d.train.x_source(0, 0) = std::numeric_limits<double>::infinity();
  const DaDemoReport r = train_da(d, o);
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.message.empty());
}

}  // namespace
}  // namespace gsnav
