#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsnav/domain_adapt.hpp"

namespace gsnav {

/// Two domains sharing content variables; the target domain applies a fixed
/// linear distortion and offset to the source observation model.
struct TwoDomainOptions {
  int input_dim = 16;
  int content_dim = 4;
  double shift = 1.0;       ///< norm of the target offset, orthogonal to the content subspace
  double distortion = 0.2;  ///< scale of the target linear distortion
  double noise = 0.1;
};

struct DomainSplit {
  Eigen::MatrixXd x_source;
  Eigen::MatrixXd y_source;  ///< content of the source samples (may be empty)
  Eigen::MatrixXd x_target;
  Eigen::MatrixXd y_target;
};

struct TwoDomainData {
  DomainSplit train;
  DomainSplit test;
};

TwoDomainData make_two_domain_data(const TwoDomainOptions& options, int train_per_domain,
                                   int test_per_domain, std::uint64_t seed);

struct DaDemoOptions {
  int epochs = 100;
  int batch_size = 50;
  int train_per_domain = 1000;
  int test_per_domain = 500;
  TwoDomainOptions data;
  DaConfig network;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct DaEpochMetrics {
  int epoch = 0;
  double da_loss = 0.0;
  double disc_accuracy = 0.0;
  double gsi = 0.0;
  double probe_accuracy = 0.0;
  double task_loss = 0.0;  ///< held-out content MSE on the source domain (0 without targets)
};

struct DaDemoReport {
  std::vector<DaEpochMetrics> epochs;  ///< epoch 0 is the untrained baseline
  bool diverged = false;
  std::string message;
};

/// Joint training on the synthetic two-domain set.
DaDemoReport train_da_demo(const DaDemoOptions& options);

/// Joint training on externally supplied data. Without source targets the
/// task term is zero and only the adversarial objective is optimized.
DaDemoReport train_da(const TwoDomainData& data, const DaDemoOptions& options);

/// Metrics of the current network on a held-out split.
DaEpochMetrics evaluate_da(const DaNetwork& net, const DomainSplit& test, int epoch,
                           std::uint64_t seed, unsigned threads = 0);

/// `epoch,L_DA,disc_acc,gsi,probe_acc,task_loss` with one row per epoch.
std::string report_csv(const DaDemoReport& report);

}  // namespace gsnav
