#include <algorithm>
#include <fstream>
#include <numeric>

#include <CLI11.hpp>

#include "app.hpp"
#include "common.hpp"
#include "gsnav/alignment_metrics.hpp"
#include "gsnav/da_demo.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/feature_dump.hpp"
#include "gsnav/random.hpp"

namespace gsnav::cli {

namespace {

struct DaArgs {
  CommonOptions common;
  int epochs = -1;
  double lambda = -1.0;
  std::string report;
  std::vector<std::string> features;
  bool score = false;
};

/// Shuffled 70/30 split of one dump's rows.
void split_rows(const Eigen::MatrixXd& x, Rng& rng, Eigen::MatrixXd& train, Eigen::MatrixXd& test) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  const Eigen::Index n_train = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(0.7 * n), 1, n - 1);
  train.resize(n_train, x.cols());
  test.resize(n - n_train, x.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < n_train) train.row(i) = x.row(order[i]);
    else test.row(i - n_train) = x.row(order[i]);
  }
}

int score_dumps(const FeatureDump& src, const FeatureDump& tgt, const DaArgs& a, std::ostream& out) {
  const Eigen::Index n = src.features.rows() + tgt.features.rows();
  Eigen::MatrixXd all(n, src.features.cols());
  all << src.features, tgt.features;
  std::vector<int> domain(n, 0);
  std::fill(domain.begin(), domain.begin() + src.features.rows(), 1);
  std::vector<int> labels;
  labels.reserve(n);
  for (auto l : src.labels) labels.push_back(l);
  for (auto l : tgt.labels) labels.push_back(l);

  ProbeOptions probe;
  probe.seed = derive_seed(a.common.seed, "da.probe");
  out << "gsi=" << format_double(gsi(all, domain, a.common.threads))
      << " domain_probe_acc=" << format_double(probe_accuracy(all, domain, probe))
      << " label_gsi=" << format_double(gsi(all, labels, a.common.threads)) << '\n';
  return kExitOk;
}

int run_da(const DaArgs& a, std::ostream& out) {
  EngineConfig config = load_engine_config(a.common);
  DaDemoOptions options = config.da;
  options.seed = a.common.seed;
  options.threads = a.common.threads;
  if (a.epochs >= 0) options.epochs = a.epochs;
  if (a.lambda >= 0.0) options.network.lambda_grl = a.lambda;
  options.network.validate();

  DaDemoReport report;
  if (!a.features.empty()) {
    const FeatureDump src = read_feature_dump(a.features[0]);
    const FeatureDump tgt = read_feature_dump(a.features[1]);
    if (src.features.cols() != tgt.features.cols()) {
      throw gsnav::ParseError("feature dumps disagree on dimension: " + std::to_string(src.features.cols()) +
                              " vs " + std::to_string(tgt.features.cols()));
    }
    if (src.features.rows() < 4 || tgt.features.rows() < 4) {
      throw ArgumentError("each feature dump needs at least 4 rows");
    }
    if (a.score) return score_dumps(src, tgt, a, out);
    TwoDomainData data;
    Rng rng = make_rng(a.common.seed, "da.features.split");
    split_rows(src.features, rng, data.train.x_source, data.test.x_source);
    split_rows(tgt.features, rng, data.train.x_target, data.test.x_target);
    report = train_da(data, options);
  } else {
    if (a.score) throw ArgumentError("--score needs --features");
    report = train_da_demo(options);
  }

  if (!a.report.empty()) {
    std::ofstream f(a.report, std::ios::binary);
    if (!f) throw LoadError("cannot open report file for writing: " + a.report);
    f << report_csv(report);
    if (!f) throw std::runtime_error("failed writing report " + a.report);
  }
  const DaEpochMetrics& last = report.epochs.back();
  out << "epoch=" << last.epoch << " L_DA=" << format_double(last.da_loss)
      << " disc_acc=" << format_double(last.disc_accuracy) << " gsi=" << format_double(last.gsi)
      << " probe_acc=" << format_double(last.probe_accuracy)
      << " task_loss=" << format_double(last.task_loss) << '\n';
  if (report.diverged) {
    out << "diverged: " << report.message << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

void register_da_demo(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<DaArgs>();
  CLI::App* cmd = app.add_subcommand("da-demo", "Domain-adversarial feature alignment demo with metrics");
  add_common_options(*cmd, args->common);
  cmd->add_option("--epochs", args->epochs, "Training epochs (config default when omitted)");
  cmd->add_option("--lambda", args->lambda, "Gradient reversal strength (config default when omitted)");
  cmd->add_option("--report", args->report, "Per-epoch CSV report path");
  cmd->add_option("--features", args->features, "Source and target feature dumps")->expected(2);
  cmd->add_flag("--score", args->score, "Only score the dumps with gsi and the domain probe");
  cmd->callback([args, &selected, &out] { selected = [args, &out] { return run_da(*args, out); }; });
}

}  // namespace gsnav::cli
