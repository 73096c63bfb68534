#include "gsnav/da_demo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <Eigen/QR>

#include "gsnav/alignment_metrics.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/random.hpp"

namespace gsnav {

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double sigma, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng, sigma);
  }
  return m;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx,
                            std::size_t begin, std::size_t end) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(end - begin), m.cols());
  for (std::size_t k = begin; k < end; ++k) out.row(static_cast<Eigen::Index>(k - begin)) = m.row(idx[k]);
  return out;
}

}  // namespace

TwoDomainData make_two_domain_data(const TwoDomainOptions& o, int train_per_domain,
                                   int test_per_domain, std::uint64_t seed) {
  if (o.input_dim <= 0 || o.content_dim <= 0) throw ArgumentError("two-domain sizes must be positive");
  if (train_per_domain <= 0 || test_per_domain <= 0) throw ArgumentError("two-domain sample counts must be positive");
  Rng rng = make_rng(seed, "da.data");
  const Eigen::MatrixXd mix = gaussian_matrix(o.input_dim, o.content_dim, 1.0 / std::sqrt(o.content_dim), rng);
  const Eigen::MatrixXd distort =
      Eigen::MatrixXd::Identity(o.input_dim, o.input_dim) +
      gaussian_matrix(o.input_dim, o.input_dim, o.distortion / std::sqrt(o.input_dim), rng);
  // The style offset lives outside the content subspace.
  Eigen::VectorXd offset = gaussian_matrix(o.input_dim, 1, 1.0, rng).col(0);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(mix);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(o.input_dim, o.content_dim);
  if (o.input_dim > o.content_dim) offset -= basis * (basis.transpose() * offset);
  offset *= o.shift / offset.norm();

  auto sample = [&](int n, bool target, Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y = gaussian_matrix(n, o.content_dim, 1.0, rng);
    x = y * mix.transpose();
    if (target) {
      x = x * distort.transpose();
      x.rowwise() += offset.transpose();
    }
    x += gaussian_matrix(n, o.input_dim, o.noise, rng);
  };
  TwoDomainData d;
  sample(train_per_domain, false, d.train.x_source, d.train.y_source);
  sample(train_per_domain, true, d.train.x_target, d.train.y_target);
  sample(test_per_domain, false, d.test.x_source, d.test.y_source);
  sample(test_per_domain, true, d.test.x_target, d.test.y_target);
  return d;
}

DaEpochMetrics evaluate_da(const DaNetwork& net, const DomainSplit& test, int epoch,
                           std::uint64_t seed, unsigned threads) {
  DaEpochMetrics m;
  m.epoch = epoch;
  const Eigen::MatrixXd zs = net.features(test.x_source);
  const Eigen::MatrixXd zt = net.features(test.x_target);
  const Eigen::VectorXd ds = net.discriminate(test.x_source);
  const Eigen::VectorXd dt = net.discriminate(test.x_target);
  m.da_loss = da_loss(ds, dt);
  const double correct = static_cast<double>((ds.array() > 0.5).count() + (dt.array() < 0.5).count());
  m.disc_accuracy = correct / static_cast<double>(ds.size() + dt.size());

  Eigen::MatrixXd z(zs.rows() + zt.rows(), zs.cols());
  z << zs, zt;
  std::vector<int> labels(static_cast<std::size_t>(z.rows()), 0);
  std::fill(labels.begin(), labels.begin() + zs.rows(), 1);
  m.gsi = gsi(z, labels, threads);
  ProbeOptions probe;
  probe.seed = derive_seed(seed, "da.probe");
  m.probe_accuracy = probe_accuracy(z, labels, probe);

  if (test.y_source.size() > 0) {
    const Eigen::MatrixXd diff = net.predict(test.x_source) - test.y_source;
    m.task_loss = diff.squaredNorm() / static_cast<double>(diff.size());
  }
  return m;
}

DaDemoReport train_da(const TwoDomainData& data, const DaDemoOptions& options) {
  if (options.epochs < 0) throw ArgumentError("epochs must be >= 0");
  if (options.batch_size <= 0) throw ArgumentError("batch size must be positive");
  const DomainSplit& tr = data.train;
  if (tr.x_source.rows() == 0 || tr.x_target.rows() == 0) {
    throw ArgumentError("domain adaptation needs training samples from both domains");
  }
  if (tr.x_source.cols() != tr.x_target.cols()) throw ArgumentError("source and target widths differ");
  const bool has_task = tr.y_source.size() > 0;
  const int target_dim = has_task ? static_cast<int>(tr.y_source.cols()) : 1;

  DaNetwork net(static_cast<int>(tr.x_source.cols()), target_dim, options.network, options.seed);
  Rng rng = make_rng(options.seed, "da.batches");
  DaDemoReport report;
  report.epochs.push_back(evaluate_da(net, data.test, 0, options.seed, options.threads));

  const TaskLoss zero_task = [](const Eigen::MatrixXd&, Eigen::MatrixXd& g) {
    g.setZero();
    return 0.0;
  };

  std::vector<Eigen::Index> is(static_cast<std::size_t>(tr.x_source.rows()));
  std::vector<Eigen::Index> it(static_cast<std::size_t>(tr.x_target.rows()));
  std::iota(is.begin(), is.end(), Eigen::Index{0});
  std::iota(it.begin(), it.end(), Eigen::Index{0});
  const std::size_t bs = static_cast<std::size_t>(options.batch_size);

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(is.begin(), is.end(), rng);
    std::shuffle(it.begin(), it.end(), rng);
    const std::size_t batches = std::max<std::size_t>(1, std::min(is.size(), it.size()) / bs);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * bs;
      const std::size_t hs = std::min(is.size(), lo + bs);
      const std::size_t ht = std::min(it.size(), lo + bs);
      const Eigen::MatrixXd xs = select_rows(tr.x_source, is, lo, hs);
      const Eigen::MatrixXd xt = select_rows(tr.x_target, it, lo, ht);
      const LossGrad task = has_task ? net.task_branch(xs, select_rows(tr.y_source, is, lo, hs))
                                     : net.task_branch(xs, zero_task);
      const LossGrad da = net.da_branch(xs, xt, true);
      const LossGrad total = total_loss(task, da, options.network.lambda1, options.network.lambda2);
      if (!std::isfinite(total.value)) {
        report.diverged = true;
        report.message = "non-finite loss at epoch " + std::to_string(epoch);
        return report;
      }
      net.apply(total.grads);
    }
    const DaEpochMetrics m = evaluate_da(net, data.test, epoch, options.seed, options.threads);
    report.epochs.push_back(m);
    if (!std::isfinite(m.da_loss) || !std::isfinite(m.task_loss)) {
      report.diverged = true;
      report.message = "non-finite metrics at epoch " + std::to_string(epoch);
      return report;
    }
  }
  return report;
}

DaDemoReport train_da_demo(const DaDemoOptions& options) {
  const TwoDomainData data = make_two_domain_data(options.data, options.train_per_domain,
                                                  options.test_per_domain, options.seed);
  return train_da(data, options);
}

std::string report_csv(const DaDemoReport& report) {
  std::ostringstream os;
  os << "epoch,L_DA,disc_acc,gsi,probe_acc,task_loss\n";
  char line[256];
  for (const DaEpochMetrics& m : report.epochs) {
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.9g,%.9g,%.9g\n", m.epoch, m.da_loss,
                  m.disc_accuracy, m.gsi, m.probe_accuracy, m.task_loss);
    os << line;
  }
  return os.str();
}

}  // namespace gsnav
