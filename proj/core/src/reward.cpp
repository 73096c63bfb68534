#include "gsnav/reward.hpp"

#include <algorithm>
#include <cmath>

#include "gsnav/errors.hpp"

namespace gsnav {

void EpisodeConfig::validate() const {
  if (!(z_min < z_max)) throw ConfigError("env z range must satisfy z_min < z_max");
  if (!(v_max > 0.0)) throw ConfigError("env v_max must be positive");
  if (!(reach_radius > 0.0)) throw ConfigError("env reach radius must be positive");
  if (max_steps <= 0) throw ConfigError("env max_steps must be positive");
  if ((start_min.array() > start_max.array()).any()) {
    throw ConfigError("env start region min exceeds max");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::running: return "running";
    case Termination::crash_z: return "crash_z";
    case Termination::collision: return "collision";
    case Termination::success: return "success";
    case Termination::timeout: return "timeout";
    case Termination::fault: return "fault";
  }
  return "unknown";
}

RewardBreakdown compute_reward(const QuadState& prev, const QuadState& cur,
                               const Eigen::Vector3d& action, const Eigen::Vector3d& previous_action,
                               const StepEvents& events, const EpisodeConfig& config, double dt) {
  const RewardWeights& w = config.weights;
  RewardBreakdown r;

  r.collision = w.collision * (events.collision ? 1.0 : 0.0);

  const double vz_body = std::abs(cur.body_velocity().z());
  r.z_velocity = w.z_velocity * std::min(vz_body, 1.0);

  r.action_magnitude = w.action_magnitude * action.squaredNorm();
  r.action_change = w.action_change * (action - previous_action).squaredNorm();

  const double d_step = config.v_max * dt;
  const double d_prev = (config.goal - prev.position).norm();
  const double d_cur = (config.goal - cur.position).norm();
  r.distance = w.distance * std::clamp(d_prev - d_cur, -d_step, d_step);

  r.success = w.success * (events.success ? 1.0 : 0.0);

  const double speed = cur.velocity.norm();
  const double excess = speed > config.v_max ? std::min(std::exp(speed - config.v_max) - 1.0, 5.0) : 0.0;
  r.velocity_excess = w.velocity_excess * excess;

  r.total = 0.0;
  for (double term : r.terms()) r.total += term;
  return r;
}

Termination check_termination(const QuadState& quad, const EpisodeConfig& config,
                              const OccupancyMap& map, int step_count) {
  const double z = quad.position.z();
  if (!(z >= config.z_min && z <= config.z_max)) return Termination::crash_z;
  if (map.occupied(quad.position)) return Termination::collision;
  if ((quad.position - config.goal).norm() <= config.reach_radius) return Termination::success;
  if (step_count >= config.max_steps) return Termination::timeout;
  return Termination::running;
}

}  // namespace gsnav
