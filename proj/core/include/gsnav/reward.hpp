#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "gsnav/flight_dynamics.hpp"
#include "gsnav/occupancy_map.hpp"

namespace gsnav {

/// Weights of the composite navigation reward. Each penalty term r_i is a
/// non-negative magnitude; its negative weight makes the contribution <= 0.
struct RewardWeights {
  double collision = -80.0;
  double z_velocity = -0.5;
  double action_magnitude = -0.3;
  double action_change = -0.6;
  double distance = 30.0;
  double success = 80.0;
  double velocity_excess = -1.0;
};

struct EpisodeConfig {
  Eigen::Vector3d goal{8.0, 0.0, 1.0};
  Eigen::Vector3d start_min{-0.5, -0.5, 0.8};
  Eigen::Vector3d start_max{0.5, 0.5, 1.2};
  double z_min = 0.1;
  double z_max = 1.7;
  double v_max = 2.0;
  double reach_radius = 0.3;
  int max_steps = 512;
  RewardWeights weights;

  void validate() const;
};

enum class Termination { running, crash_z, collision, success, timeout, fault };

std::string_view to_string(Termination t);
inline bool is_terminal(Termination t) { return t != Termination::running; }

struct StepEvents {
  bool collision = false;
  bool success = false;
};

/// Weighted contributions w_i * r_i; `total` is their sum in declaration order.
struct RewardBreakdown {
  double collision = 0.0;
  double z_velocity = 0.0;
  double action_magnitude = 0.0;
  double action_change = 0.0;
  double distance = 0.0;
  double success = 0.0;
  double velocity_excess = 0.0;
  double total = 0.0;

  std::array<double, 7> terms() const {
    return {collision, z_velocity, action_magnitude, action_change, distance, success, velocity_excess};
  }
};

/// `action` and `previous_action` are the first three policy action components;
/// `dt` is the control period used for the per-step distance clamp v_max * dt.
RewardBreakdown compute_reward(const QuadState& prev, const QuadState& cur,
                               const Eigen::Vector3d& action, const Eigen::Vector3d& previous_action,
                               const StepEvents& events, const EpisodeConfig& config, double dt);

/// Pure check with precedence crash_z > collision > success > timeout.
Termination check_termination(const QuadState& quad, const EpisodeConfig& config,
                              const OccupancyMap& map, int step_count);

}  // namespace gsnav
