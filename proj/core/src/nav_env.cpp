#include "gsnav/nav_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsnav/errors.hpp"
#include "gsnav/parallel.hpp"

namespace gsnav {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void clamp_unit(Image& img) {
  for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace

void EnvConfig::validate() const {
  episode.validate();
  if (width <= 0 || height <= 0) throw ConfigError("camera size must be positive");
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) throw ConfigError("camera fov must lie in (0, 180)");
  if (visual.fov && !(visual.fov_min_deg > 0.0 && visual.fov_min_deg <= visual.fov_max_deg &&
                      visual.fov_max_deg < 180.0)) {
    throw ConfigError("fov randomization range must satisfy 0 < min <= max < 180");
  }
  if (visual.colors && visual.color.alpha_min > visual.color.alpha_max) {
    throw ConfigError("color scale range min exceeds max");
  }
  if (visual.colors && visual.color.beta_min > visual.color.beta_max) {
    throw ConfigError("color offset range min exceeds max");
  }
  if (dynamics.control_decimation < 1) throw ConfigError("control decimation must be >= 1");
  if (!(dynamics.dt_sim > 0.0 && dynamics.dt_sim <= 0.02)) {
    throw ConfigError("dynamics dt_sim must lie in (0, 0.02]");
  }
  if (!(dynamics.mass > 0.0) || (dynamics.inertia.array() <= 0.0).any()) {
    throw ConfigError("mass and inertia must be positive");
  }
  if (latency.delay_min_ms < 0.0 || latency.delay_min_ms > latency.delay_max_ms) {
    throw ConfigError("latency delay range must satisfy 0 <= min <= max");
  }
  if (!(latency.interval_min_ms > 0.0) || latency.interval_min_ms > latency.interval_max_ms) {
    throw ConfigError("latency interval range must satisfy 0 < min <= max");
  }
  if (latency.action_noise_sigma < 0.0) throw ConfigError("action noise sigma must be >= 0");
  if (max_reset_tries < 1) throw ConfigError("max reset tries must be >= 1");
}

SceneAssets SceneAssets::make(GaussianCloud cloud, std::vector<Eigen::Vector3d> collision_points,
                              double voxel, double inflation, double opacity_min) {
  cloud.check_consistent();
  if (collision_points.empty()) collision_points = extract_point_cloud(cloud, opacity_min);
  SceneAssets assets;
  assets.map = std::make_shared<const OccupancyMap>(
      OccupancyMap::build(collision_points, voxel, inflation));
  assets.cloud = std::make_shared<const GaussianCloud>(std::move(cloud));
  return assets;
}

StateVector make_state_vector(const QuadState& quad, const EpisodeConfig& episode,
                              const PerceptionOffsets& offsets) {
  StateVector s{};
  const Eigen::Matrix3d R = quad.rotation();
  const Eigen::Vector3d vb = R.transpose() * quad.velocity + offsets.velocity;
  for (int i = 0; i < 3; ++i) s[StateLayout::velocity + i] = vb[i];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) s[StateLayout::rotation + 3 * r + c] = R(r, c);
  }
  const Eigen::Vector3d to_goal = episode.goal - quad.position;
  if (to_goal.norm() > episode.reach_radius) {
    const Eigen::Vector3d noisy = to_goal + offsets.direction;
    const double n = noisy.norm();
    if (n > 1e-12) {
      for (int i = 0; i < 3; ++i) s[StateLayout::direction + i] = noisy[i] / n;
    }
  }
  s[StateLayout::altitude] = quad.position.z() + offsets.altitude;
  s[StateLayout::target_altitude] = episode.goal.z();
  for (int i = 0; i < 3; ++i) s[StateLayout::last_action + i] = quad.last_action[i];
  return s;
}

NavEnv::NavEnv(SceneAssets assets, EnvConfig config, std::uint64_t seed, std::uint64_t env_id)
    : assets_(std::move(assets)),
      config_(std::move(config)),
      seed_(seed),
      env_id_(env_id),
      reset_rng_(make_rng(seed, "env.reset", env_id)),
      dynamics_rng_(make_rng(seed, "env.dynamics", env_id)),
      obs_rng_(make_rng(seed, "env.obs", env_id)),
      latency_(config_.latency),
      perception_(config_.perception) {
  if (!assets_.cloud || !assets_.map) throw ArgumentError("env needs a cloud and an occupancy map");
  config_.validate();
  cloud_ = assets_.cloud;
  camera_ = CameraModel::from_fov(config_.width, config_.height, config_.fov_deg);
}

Pose NavEnv::camera_pose() const {
  return camera_pose_from_body(quad_.orientation, quad_.position,
                               config_.mount_pitch_deg * kDegToRad);
}

void NavEnv::begin_reset() {
  const EpisodeConfig& ep = config_.episode;
  Eigen::Vector3d start;
  bool found = false;
  for (int attempt = 0; attempt < config_.max_reset_tries; ++attempt) {
    for (int a = 0; a < 3; ++a) start[a] = uniform(reset_rng_, ep.start_min[a], ep.start_max[a]);
    if (!assets_.map->occupied(start)) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw ConfigError("no free start position found in the start region after " +
                      std::to_string(config_.max_reset_tries) + " tries");
  }

  const double yaw_range = config_.start_yaw_range_deg * kDegToRad;
  const double yaw = yaw_range > 0.0 ? uniform(reset_rng_, -yaw_range, yaw_range) : 0.0;
  quad_ = QuadState{};
  quad_.position = start;
  quad_.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));

  if (config_.visual.colors) {
    const ColorRandomization cr = config_.visual.color.sample(reset_rng_);
    const std::uint64_t color_seed = reset_rng_();
    cloud_ = std::make_shared<const GaussianCloud>(randomize_colors(*assets_.cloud, cr, color_seed));
  } else {
    cloud_ = assets_.cloud;
  }
  const double fov = config_.visual.fov
                         ? uniform(reset_rng_, config_.visual.fov_min_deg, config_.visual.fov_max_deg)
                         : config_.fov_deg;
  camera_ = CameraModel::from_fov(config_.width, config_.height, fov);

  latency_.reset(dynamics_rng_);
  perception_.reset();
  step_ = 0;
  ++episode_;
}

void NavEnv::advance(const Action& action, StepResult& out) {
  const DynamicsParams& dyn = config_.dynamics;
  const EpisodeConfig& ep = config_.episode;
  const double dt_ctrl = dyn.dt_control();
  const Action raw = action.clamped();
  const Eigen::Vector3d a_t = raw.vector().head<3>();

  out.episode = episode_;
  const QuadState prev = quad_;
  try {
    Action eff = latency_.effective_action(raw, dt_ctrl, dynamics_rng_);
    eff = add_action_noise(eff, latency_.held_noise());
    out.applied = eff;
    QuadState next = quad_;
    for (int k = 0; k < dyn.control_decimation; ++k) {
      const ControlOutput ctrl = pid_step(next, eff, dyn.dt_sim, dyn);
      next = integrate(next, ctrl.thrust, ctrl.torque, dyn.dt_sim, dyn);
    }
    quad_ = next;
    ++step_;
    out.termination = check_termination(quad_, ep, *assets_.map, step_);
    StepEvents events;
    events.collision = out.termination == Termination::collision;
    events.success = out.termination == Termination::success;
    out.breakdown = compute_reward(prev, quad_, a_t, prev.last_action, events, ep, dt_ctrl);
    out.reward = out.breakdown.total;
    quad_.last_action = a_t;
  } catch (const SimulationFault& e) {
    ++step_;
    out.termination = Termination::fault;
    out.fault = e.what();
    out.breakdown = RewardBreakdown{};
    out.reward = 0.0;
  }
  out.final_state = quad_;
  out.episode_step = step_;

  if (is_terminal(out.termination)) {
    begin_reset();
    out.reset = true;
  }
}

RenderJob NavEnv::render_job() const { return RenderJob{cloud_.get(), camera_, camera_pose()}; }

EnvObservation NavEnv::assemble(RenderOutput&& render) {
  EnvObservation obs;
  obs.rgb = std::move(render.rgb);
  clamp_unit(obs.rgb);
  if (config_.privileged) obs.depth = std::move(render.depth);
  const PerceptionOffsets offsets = perception_.step(obs_rng_);
  obs.state = make_state_vector(quad_, config_.episode, offsets);
  return obs;
}

EnvObservation NavEnv::reset() {
  return std::move(reset_batch(std::span<NavEnv>(this, 1), 1).front());
}

StepResult NavEnv::step(const Action& action) {
  return std::move(step_batch(std::span<NavEnv>(this, 1), std::span<const Action>(&action, 1), 1).front());
}

namespace {

RenderMode mode_for(const std::span<NavEnv> envs) {
  const bool privileged = std::any_of(envs.begin(), envs.end(),
                                      [](const NavEnv& e) { return e.config().privileged; });
  return privileged ? RenderMode::rgbd : RenderMode::rgb;
}

std::vector<RenderOutput> render_envs(std::span<NavEnv> envs, unsigned threads) {
  std::vector<RenderJob> jobs;
  jobs.reserve(envs.size());
  for (const NavEnv& e : envs) jobs.push_back(e.render_job());
  return render_batch(jobs, mode_for(envs), envs.front().config().render, threads);
}

}  // namespace

std::vector<EnvObservation> reset_batch(std::span<NavEnv> envs, unsigned threads) {
  if (envs.empty()) throw ArgumentError("reset_batch needs at least one environment");
  for (NavEnv& e : envs) e.begin_reset();
  std::vector<RenderOutput> images = render_envs(envs, threads);
  std::vector<EnvObservation> obs(envs.size());
  for (std::size_t i = 0; i < envs.size(); ++i) obs[i] = envs[i].assemble(std::move(images[i]));
  return obs;
}

std::vector<StepResult> step_batch(std::span<NavEnv> envs, std::span<const Action> actions,
                                   unsigned threads) {
  if (envs.empty()) throw ArgumentError("step_batch needs at least one environment");
  if (envs.size() != actions.size()) {
    throw ArgumentError("step_batch: " + std::to_string(actions.size()) + " actions for " +
                        std::to_string(envs.size()) + " environments");
  }
  for (const Action& a : actions) {
    if (!a.vector().allFinite()) throw ArgumentError("step_batch: actions must be finite");
  }

  std::vector<StepResult> results(envs.size());
  parallel_for(envs.size(), [&](std::size_t i) { envs[i].advance(actions[i], results[i]); }, threads);

  std::vector<RenderOutput> images = render_envs(envs, threads);
  for (std::size_t i = 0; i < envs.size(); ++i) {
    results[i].observation = envs[i].assemble(std::move(images[i]));
  }
  return results;
}

}  // namespace gsnav
