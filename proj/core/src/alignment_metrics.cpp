#include "gsnav/alignment_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "gsnav/errors.hpp"
#include "gsnav/parallel.hpp"
#include "gsnav/random.hpp"

namespace gsnav {

double gsi(const Eigen::MatrixXd& features, std::span<const int> labels, unsigned threads) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw ArgumentError("gsi needs at least two points");
  if (static_cast<Eigen::Index>(labels.size()) != n) throw ArgumentError("gsi: one label per row required");

  std::vector<char> same(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const Eigen::Index ii = static_cast<Eigen::Index>(i);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == ii) continue;
      const double d = (features.row(j) - features.row(ii)).squaredNorm();
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    same[i] = labels[static_cast<std::size_t>(arg)] == labels[i];
  }, threads);
  const double hits = static_cast<double>(std::count(same.begin(), same.end(), 1));
  return hits / static_cast<double>(n);
}

double probe_accuracy(const Eigen::MatrixXd& features, std::span<const int> labels,
                      const ProbeOptions& options) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n) throw ArgumentError("probe: one label per row required");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw ArgumentError("probe train fraction must lie in (0, 1)");
  }
  for (int l : labels) {
    if (l < 0) throw ArgumentError("probe labels must be non-negative");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng = make_rng(options.seed, "probe.split");
  std::shuffle(order.begin(), order.end(), rng);
  const Eigen::Index n_train = static_cast<Eigen::Index>(std::floor(options.train_fraction * n));
  const Eigen::Index n_test = n - n_train;
  if (n_train < 2 || n_test < 1) throw ArgumentError("probe: degenerate train/test split");

  std::set<int> train_classes;
  for (Eigen::Index k = 0; k < n_train; ++k) train_classes.insert(labels[order[k]]);
  if (train_classes.size() < 2) throw ArgumentError("probe: training split holds fewer than two classes");
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;

  Eigen::MatrixXd xtr(n_train, d), xte(n_test, d);
  Eigen::MatrixXd ytr = Eigen::MatrixXd::Zero(n_train, classes);
  std::vector<int> yte(static_cast<std::size_t>(n_test));
  for (Eigen::Index k = 0; k < n_train; ++k) {
    xtr.row(k) = features.row(order[k]);
    ytr(k, labels[order[k]]) = 1.0;
  }
  for (Eigen::Index k = 0; k < n_test; ++k) {
    xte.row(k) = features.row(order[n_train + k]);
    yte[k] = labels[order[n_train + k]];
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, classes);
  Eigen::RowVectorXd b = Eigen::RowVectorXd::Zero(classes);
  auto softmax = [](Eigen::MatrixXd logits) {
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      logits.row(r).array() -= logits.row(r).maxCoeff();
      logits.row(r) = logits.row(r).array().exp().matrix();
      logits.row(r) /= logits.row(r).sum();
    }
    return logits;
  };
  for (int it = 0; it < options.iterations; ++it) {
    Eigen::MatrixXd logits = xtr * w;
    logits.rowwise() += b;
    const Eigen::MatrixXd err = (softmax(std::move(logits)) - ytr) / static_cast<double>(n_train);
    w -= options.learning_rate * (xtr.transpose() * err + options.l2 * w);
    b -= options.learning_rate * err.colwise().sum();
  }

  Eigen::MatrixXd logits = xte * w;
  logits.rowwise() += b;
  Eigen::Index correct = 0;
  for (Eigen::Index k = 0; k < n_test; ++k) {
    Eigen::Index arg = 0;
    logits.row(k).maxCoeff(&arg);
    correct += arg == yte[k];
  }
  return static_cast<double>(correct) / static_cast<double>(n_test);
}

}  // namespace gsnav
