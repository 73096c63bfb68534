#pragma once

#include <cstddef>
#include <deque>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gsnav/random.hpp"

namespace gsnav {

/// Normalized policy action [T, roll, pitch, yaw-rate], each in [-1, 1].
struct Action {
  double thrust = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  static Action from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  Eigen::Vector4d vector() const { return {thrust, roll, pitch, yaw}; }
  Action clamped() const;
  bool operator==(const Action&) const = default;
};

/// Rigid-body state in a z-up world; body frame is x forward, y left, z up.
struct QuadState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();  ///< body -> world
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();       ///< body frame
  /// Body rates before the last integration step; the rate loop differentiates these.
  Eigen::Vector3d previous_angular_velocity = Eigen::Vector3d::Zero();
  /// First three components of the previous policy action.
  Eigen::Vector3d last_action = Eigen::Vector3d::Zero();

  Eigen::Matrix3d rotation() const { return orientation.toRotationMatrix(); }
  Eigen::Vector3d body_velocity() const { return orientation.conjugate() * velocity; }
  /// ZYX Euler angles (roll, pitch, yaw) in radians.
  Eigen::Vector3d euler() const;
  bool finite() const;
};

struct DynamicsParams {
  double mass = 1.0;
  Eigen::Vector3d inertia{0.01, 0.01, 0.02};
  double drag = 0.1;
  double gravity = 9.81;
  /// Maximum collective thrust as a multiple of m * g.
  double thrust_max_ratio = 2.0;
  double tilt_max_deg = 35.0;
  double yawrate_max_deg = 120.0;
  double thrust_gain = 0.5;
  /// Attitude loop: angle error (rad) -> body-rate setpoint (rad/s).
  double attitude_kp = 6.0;
  /// Rate loop gains, scaled by the inertia into torques.
  Eigen::Vector3d rate_kp{20.0, 20.0, 10.0};
  Eigen::Vector3d rate_kd{0.05, 0.05, 0.0};
  double dt_sim = 0.004;
  int control_decimation = 5;

  double dt_control() const { return dt_sim * control_decimation; }
  double hover_thrust() const { return mass * gravity; }
};

struct ControlOutput {
  double thrust = 0.0;                              ///< N along body z
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  ///< N m, body frame
};

/// Cascaded attitude-angle P / body-rate PD controller. Roll and pitch
/// commands are angle setpoints scaled by tilt_max; yaw is a rate setpoint.
ControlOutput pid_step(const QuadState& state, const Action& action, double dt,
                       const DynamicsParams& params = {});

/// One physics step: implicit-midpoint rotational update, renormalized
/// quaternion, semi-implicit Euler translation with linear drag.
/// Throws SimulationFault on non-finite results and ArgumentError for dt outside (0, 0.02].
QuadState integrate(const QuadState& state, double thrust, const Eigen::Vector3d& torque, double dt,
                    const DynamicsParams& params = {});

struct LatencyConfig {
  bool enabled = true;
  double delay_min_ms = 0.0;
  double delay_max_ms = 80.0;
  double interval_min_ms = 10.0;
  double interval_max_ms = 100.0;
  /// Std of the held additive action noise.
  double action_noise_sigma = 0.05;
  /// Re-draw delay and noise at randomized intervals within an episode.
  bool resample = true;
};

Eigen::Vector4d sample_action_noise(double sigma, Rng& rng);

/// Adds the held noise vector and re-clamps to [-1, 1].
Action add_action_noise(const Action& a, const Eigen::Vector4d& held_noise);

/// Command latency as a moving average over the commands issued within the
/// last D milliseconds, with D and the held action noise re-drawn every T ms.
class LatencyModel {
 public:
  explicit LatencyModel(LatencyConfig config = {});

  /// Clears history and draws fresh D, T and noise.
  void reset(Rng& rng);

  /// Pushes `raw` (clamped) and returns the windowed mean.
  Action effective_action(const Action& raw, double dt_ctrl, Rng& rng);

  double delay_ms() const { return delay_ms_; }
  double interval_ms() const { return interval_ms_; }
  const Eigen::Vector4d& held_noise() const { return held_noise_; }
  std::size_t history_size() const { return history_.size(); }

  /// Pins the delay and disables resampling (fixtures and deterministic runs).
  void set_fixed_delay_ms(double delay_ms);

 private:
  void resample(Rng& rng);

  LatencyConfig config_;
  std::deque<Eigen::Vector4d> history_;  ///< newest at the back
  double delay_ms_ = 0.0;
  double interval_ms_ = 0.0;
  double since_resample_ms_ = 0.0;
  bool fixed_ = false;
  Eigen::Vector4d held_noise_ = Eigen::Vector4d::Zero();
};

/// Number of most recent commands averaged for delay D at control period dt (both ms).
std::size_t latency_window(double delay_ms, double dt_ms);

}  // namespace gsnav
