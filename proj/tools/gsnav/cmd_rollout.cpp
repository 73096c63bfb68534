#include <chrono>
#include <fstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "app.hpp"
#include "common.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/rollout.hpp"
#include "gsnav/scene_bundle.hpp"

namespace gsnav::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RolloutArgs {
  CommonOptions common;
  std::string policy = "goto";
  int episodes = 10;
  int envs = 1;
  std::string log;
};

Json vec(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json vec(const Action& a) { return Json::array({a.thrust, a.roll, a.pitch, a.yaw}); }

Json to_json(const StepRecord& r) {
  const RewardBreakdown& b = r.reward;
  Json j;
  j["env"] = r.env;
  j["episode"] = r.episode;
  j["step"] = r.step;
  j["t"] = r.time;
  j["action"] = vec(r.action);
  j["applied"] = vec(r.applied);
  j["position"] = vec(r.state.position);
  j["velocity"] = vec(r.state.velocity);
  const Eigen::Quaterniond& q = r.state.orientation;
  j["orientation"] = Json::array({q.w(), q.x(), q.y(), q.z()});
  j["reward"] = b.total;
  j["reward_terms"] = {{"collision", b.collision},
                       {"z_velocity", b.z_velocity},
                       {"action_magnitude", b.action_magnitude},
                       {"action_change", b.action_change},
                       {"distance", b.distance},
                       {"success", b.success},
                       {"velocity_excess", b.velocity_excess}};
  j["termination"] = std::string(to_string(r.termination));
  j["reset"] = r.reset;
  if (!r.fault.empty()) j["fault"] = r.fault;
  return j;
}

int run_rollout_cmd(const RolloutArgs& a, std::ostream& out) {
  if (a.episodes < 1) throw ArgumentError("--episodes must be >= 1");
  if (a.envs < 1) throw ArgumentError("--envs must be >= 1");
  RolloutOptions options;
  options.policy = parse_policy(a.policy);
  options.episodes = a.episodes;
  options.envs = a.envs;
  options.seed = a.common.seed;
  options.threads = a.common.threads;

  EngineConfig config = load_engine_config(a.common);
  const LoadedScene scene = load_scene(config, a.common.seed);
  const SceneAssets assets = make_assets(scene, config.scene);

  std::ofstream log;
  if (!a.log.empty()) {
    log.open(a.log, std::ios::binary);
    if (!log) throw LoadError("cannot open log file for writing: " + a.log);
  }
  std::function<void(const StepRecord&)> on_step;
  if (log.is_open()) on_step = [&log](const StepRecord& r) { log << to_json(r).dump() << '\n'; };

  const auto t0 = std::chrono::steady_clock::now();
  const RolloutSummary s = run_rollout(assets, scene.env, options, on_step);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (log.is_open()) {
    log.flush();
    if (!log) throw std::runtime_error("failed writing log file " + a.log);
  }

  out << "policy=" << to_string(options.policy) << " episodes=" << s.episodes << " success=" << s.success
      << " collision=" << s.collision << " crash_z=" << s.crash_z << " timeout=" << s.timeout
      << " fault=" << s.fault << " mean_reward=" << format_double(s.mean_return) << '\n';
  out << "steps=" << s.steps << " steps_per_second=" << format_double(s.steps / seconds) << '\n';
  return s.fault > 0 ? kExitRuntime : kExitOk;
}

}  // namespace

void register_rollout(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<RolloutArgs>();
  CLI::App* cmd = app.add_subcommand("rollout", "Run scripted-policy episodes and log every step as JSONL");
  add_common_options(*cmd, args->common);
  cmd->add_option("--policy", args->policy, "goto, hover or random");
  cmd->add_option("--episodes", args->episodes, "Episodes to complete");
  cmd->add_option("--envs", args->envs, "Environments stepped as one batch");
  cmd->add_option("--log", args->log, "JSONL step log path");
  cmd->callback([args, &selected, &out] { selected = [args, &out] { return run_rollout_cmd(*args, out); }; });
}

}  // namespace gsnav::cli
