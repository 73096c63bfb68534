#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "gsnav/flight_dynamics.hpp"
#include "gsnav/nav_env.hpp"
#include "gsnav/policies.hpp"
#include "gsnav/reward.hpp"

namespace gsnav {

struct RolloutOptions {
  PolicyKind policy = PolicyKind::go_to;
  int episodes = 10;
  int envs = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  GotoGains gains;
};

/// One control step of one environment, as written to rollout logs.
struct StepRecord {
  int env = 0;
  std::uint64_t episode = 0;
  int step = 0;
  double time = 0.0;  ///< simulated seconds since the episode start
  Action action;
  Action applied;
  QuadState state;
  RewardBreakdown reward;
  Termination termination = Termination::running;
  bool reset = false;
  std::string fault;
};

struct RolloutSummary {
  int episodes = 0;
  int success = 0;
  int collision = 0;
  int crash_z = 0;
  int timeout = 0;
  int fault = 0;
  double mean_return = 0.0;  ///< mean undiscounted episode return
  long long steps = 0;
};

/// Runs scripted-policy episodes on `envs` batched environments until
/// `episodes` have finished. Episodes complete in env order within a step, so
/// the set counted is deterministic. `on_step` sees every step of every env.
RolloutSummary run_rollout(const SceneAssets& assets, const EnvConfig& config,
                           const RolloutOptions& options,
                           const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace gsnav
