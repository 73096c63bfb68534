#include "gsnav/rollout.hpp"

#include <vector>

#include "gsnav/errors.hpp"

namespace gsnav {

RolloutSummary run_rollout(const SceneAssets& assets, const EnvConfig& config,
                           const RolloutOptions& options,
                           const std::function<void(const StepRecord&)>& on_step) {
  if (options.episodes < 1) throw ArgumentError("rollout needs at least one episode");
  if (options.envs < 1) throw ArgumentError("rollout needs at least one environment");

  std::vector<NavEnv> envs;
  std::vector<ScriptedPolicy> policies;
  envs.reserve(options.envs);
  for (int i = 0; i < options.envs; ++i) {
    envs.emplace_back(assets, config, options.seed, i);
    policies.emplace_back(options.policy, config.dynamics, options.seed, i, options.gains);
  }

  std::vector<EnvObservation> obs = reset_batch(envs, options.threads);
  std::vector<double> returns(envs.size(), 0.0);
  std::vector<Action> actions(envs.size());
  const double dt = config.dynamics.dt_control();

  RolloutSummary summary;
  double return_sum = 0.0;
  while (summary.episodes < options.episodes) {
    for (std::size_t i = 0; i < envs.size(); ++i) actions[i] = policies[i].act(obs[i].state);
    std::vector<StepResult> results = step_batch(envs, actions, options.threads);
    for (std::size_t i = 0; i < envs.size(); ++i) {
      StepResult& r = results[i];
      ++summary.steps;
      returns[i] += r.reward;
      if (on_step) {
        StepRecord rec;
        rec.env = static_cast<int>(i);
        rec.episode = r.episode;
        rec.step = r.episode_step;
        rec.time = r.episode_step * dt;
        rec.action = actions[i].clamped();
        rec.applied = r.applied;
        rec.state = r.final_state;
        rec.reward = r.breakdown;
        rec.termination = r.termination;
        rec.reset = r.reset;
        rec.fault = r.fault;
        on_step(rec);
      }
      if (is_terminal(r.termination) && summary.episodes < options.episodes) {
        ++summary.episodes;
        return_sum += returns[i];
        switch (r.termination) {
          case Termination::success: ++summary.success; break;
          case Termination::collision: ++summary.collision; break;
          case Termination::crash_z: ++summary.crash_z; break;
          case Termination::timeout: ++summary.timeout; break;
          case Termination::fault: ++summary.fault; break;
          case Termination::running: break;
        }
      }
      if (is_terminal(r.termination)) returns[i] = 0.0;
      obs[i] = std::move(r.observation);
    }
  }
  summary.mean_return = return_sum / summary.episodes;
  return summary;
}

}  // namespace gsnav
