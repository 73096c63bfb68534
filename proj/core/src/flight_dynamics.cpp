#include "gsnav/flight_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsnav/errors.hpp"

namespace gsnav {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }
}  // namespace

Action Action::clamped() const {
  return {clamp_unit(thrust), clamp_unit(roll), clamp_unit(pitch), clamp_unit(yaw)};
}

Eigen::Vector3d QuadState::euler() const {
  const Eigen::Quaterniond q = orientation.normalized();
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  const double roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  const double pitch = std::asin(std::clamp(2.0 * (w * y - z * x), -1.0, 1.0));
  const double yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  return {roll, pitch, yaw};
}

bool QuadState::finite() const {
  return position.allFinite() && velocity.allFinite() && orientation.coeffs().allFinite() &&
         angular_velocity.allFinite();
}

ControlOutput pid_step(const QuadState& state, const Action& action, double dt,
                       const DynamicsParams& params) {
  if (!(dt > 0.0)) throw ArgumentError("pid_step: dt must be positive");
  const Action a = action.clamped();
  const double tilt_max = params.tilt_max_deg * kDegToRad;
  const Eigen::Vector3d angles = state.euler();

  ControlOutput out;
  const double thrust_max = params.thrust_max_ratio * params.hover_thrust();
  out.thrust =
      std::clamp(params.hover_thrust() * (1.0 + a.thrust * params.thrust_gain), 0.0, thrust_max);

  const Eigen::Vector3d rate_setpoint(params.attitude_kp * (a.roll * tilt_max - angles.x()),
                                      params.attitude_kp * (a.pitch * tilt_max - angles.y()),
                                      a.yaw * params.yawrate_max_deg * kDegToRad);
  // Derivative on measurement avoids kicks when the setpoint steps.
  const Eigen::Vector3d rate_derivative =
      (state.angular_velocity - state.previous_angular_velocity) / dt;
  const Eigen::Vector3d accel = params.rate_kp.cwiseProduct(rate_setpoint - state.angular_velocity) -
                                params.rate_kd.cwiseProduct(rate_derivative);
  out.torque = params.inertia.cwiseProduct(accel);
  return out;
}

QuadState integrate(const QuadState& state, double thrust, const Eigen::Vector3d& torque, double dt,
                    const DynamicsParams& params) {
  if (!(dt > 0.0 && dt <= 0.02)) throw ArgumentError("integrate: dt must lie in (0, 0.02]");
  const Eigen::Vector3d inertia = params.inertia;
  const Eigen::Vector3d omega = state.angular_velocity;

  // Implicit midpoint on Euler's equations; preserves rotational energy of
  // torque-free motion up to the fixed-point tolerance.
  Eigen::Vector3d next_omega = omega;
  for (int iter = 0; iter < 8; ++iter) {
    const Eigen::Vector3d mid = 0.5 * (omega + next_omega);
    const Eigen::Vector3d gyro = mid.cross(inertia.cwiseProduct(mid));
    const Eigen::Vector3d candidate = omega + dt * (torque - gyro).cwiseQuotient(inertia);
    const double change = (candidate - next_omega).norm();
    next_omega = candidate;
    if (change < 1e-14) break;
  }

  QuadState next = state;
  next.previous_angular_velocity = omega;
  next.angular_velocity = next_omega;

  const Eigen::Vector3d mid_omega = 0.5 * (omega + next_omega);
  const double angle = mid_omega.norm() * dt;
  Eigen::Quaterniond delta = Eigen::Quaterniond::Identity();
  if (angle > 0.0) delta = Eigen::Quaterniond(Eigen::AngleAxisd(angle, mid_omega.normalized()));
  next.orientation = (state.orientation * delta).normalized();

  const Eigen::Vector3d gravity(0.0, 0.0, -params.gravity);
  const Eigen::Vector3d thrust_world = next.orientation * Eigen::Vector3d(0.0, 0.0, thrust);
  const Eigen::Vector3d accel = gravity + thrust_world / params.mass - params.drag * state.velocity;
  next.velocity = state.velocity + dt * accel;
  next.position = state.position + dt * next.velocity;

  if (!next.finite()) throw SimulationFault("non-finite quadrotor state after integration");
  return next;
}

Eigen::Vector4d sample_action_noise(double sigma, Rng& rng) {
  if (sigma < 0.0) throw ArgumentError("action noise sigma must be non-negative");
  Eigen::Vector4d n;
  for (int i = 0; i < 4; ++i) n[i] = normal(rng, sigma);
  return n;
}

Action add_action_noise(const Action& a, const Eigen::Vector4d& held_noise) {
  return Action::from_vector(a.vector() + held_noise).clamped();
}

std::size_t latency_window(double delay_ms, double dt_ms) {
  if (!(dt_ms > 0.0)) throw ArgumentError("latency window needs a positive control period");
  // Commands issued strictly less than D ms ago are inside the window.
  const double slots = std::ceil(delay_ms / dt_ms - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, slots)));
}

LatencyModel::LatencyModel(LatencyConfig config) : config_(config) {}

void LatencyModel::reset(Rng& rng) {
  history_.clear();
  since_resample_ms_ = 0.0;
  if (fixed_) return;
  resample(rng);
}

void LatencyModel::resample(Rng& rng) {
  if (config_.enabled) {
    delay_ms_ = uniform(rng, config_.delay_min_ms, config_.delay_max_ms);
    interval_ms_ = uniform(rng, config_.interval_min_ms, config_.interval_max_ms);
  } else {
    delay_ms_ = 0.0;
    interval_ms_ = config_.interval_max_ms;
  }
  held_noise_ = sample_action_noise(config_.action_noise_sigma, rng);
}

void LatencyModel::set_fixed_delay_ms(double delay_ms) {
  delay_ms_ = delay_ms;
  fixed_ = true;
}

Action LatencyModel::effective_action(const Action& raw, double dt_ctrl, Rng& rng) {
  if (!(dt_ctrl > 0.0)) throw ArgumentError("effective_action: dt_ctrl must be positive");
  const double dt_ms = dt_ctrl * 1000.0;

  if (!fixed_ && config_.resample) {
    since_resample_ms_ += dt_ms;
    if (since_resample_ms_ >= interval_ms_) {
      resample(rng);
      since_resample_ms_ = 0.0;
    }
  }

  history_.push_back(raw.clamped().vector());
  const std::size_t max_window = latency_window(std::max(delay_ms_, config_.delay_max_ms), dt_ms);
  while (history_.size() > max_window) history_.pop_front();

  const std::size_t window = std::min(latency_window(delay_ms_, dt_ms), history_.size());
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  for (std::size_t k = history_.size() - window; k < history_.size(); ++k) sum += history_[k];
  return Action::from_vector(sum / static_cast<double>(window));
}

}  // namespace gsnav
