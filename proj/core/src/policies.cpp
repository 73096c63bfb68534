#include "gsnav/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsnav/errors.hpp"

namespace gsnav {

PolicyKind parse_policy(std::string_view name) {
  if (name == "hover") return PolicyKind::hover;
  if (name == "goto") return PolicyKind::go_to;
  if (name == "random") return PolicyKind::random;
  throw ArgumentError("unknown policy '" + std::string(name) + "' (expected goto, hover or random)");
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::hover: return "hover";
    case PolicyKind::go_to: return "goto";
    case PolicyKind::random: return "random";
  }
  return "hover";
}

ScriptedPolicy::ScriptedPolicy(PolicyKind kind, const DynamicsParams& dynamics, std::uint64_t seed,
                               std::uint64_t env_id, GotoGains gains)
    : kind_(kind), dynamics_(dynamics), gains_(gains), rng_(make_rng(seed, "policy", env_id)) {}

Action ScriptedPolicy::act(const StateVector& s) {
  switch (kind_) {
    case PolicyKind::hover:
      return {};
    case PolicyKind::random:
      return {uniform(rng_, -1.0, 1.0), uniform(rng_, -1.0, 1.0), uniform(rng_, -1.0, 1.0),
              uniform(rng_, -1.0, 1.0)};
    case PolicyKind::go_to:
      break;
  }

  Eigen::Matrix3d R;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R(r, c) = s[StateLayout::rotation + 3 * r + c];
  }
  const Eigen::Vector3d vb(s[StateLayout::velocity], s[StateLayout::velocity + 1], s[StateLayout::velocity + 2]);
  const Eigen::Vector3d v = R * vb;
  const Eigen::Vector3d dir(s[StateLayout::direction], s[StateLayout::direction + 1],
                            s[StateLayout::direction + 2]);
  const double z = s[StateLayout::altitude];
  const double z_goal = s[StateLayout::target_altitude];

  const double g = dynamics_.gravity;
  const double tilt_max = dynamics_.tilt_max_deg * std::numbers::pi / 180.0;
  const double yawrate_max = dynamics_.yawrate_max_deg * std::numbers::pi / 180.0;

  Eigen::Vector2d v_des = gains_.cruise_speed * dir.head<2>();
  const double vz_des = std::clamp(gains_.altitude_gain * (z_goal - z), -0.5, 0.5);
  const Eigen::Vector2d a_xy = gains_.velocity_gain * (v_des - v.head<2>());
  const double a_z = gains_.climb_gain * (vz_des - v.z());

  const double yaw = std::atan2(R(1, 0), R(0, 0));
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double a_fwd = cy * a_xy.x() + sy * a_xy.y();
  const double a_left = -sy * a_xy.x() + cy * a_xy.y();

  Action a;
  a.pitch = std::atan(a_fwd / g) / tilt_max;
  a.roll = -std::atan(a_left / g) / tilt_max;
  const double tilt = std::cos(a.roll * tilt_max) * std::cos(a.pitch * tilt_max);
  const double thrust_ratio = (g + a_z) / (g * std::max(tilt, 0.5));
  a.thrust = (thrust_ratio - 1.0) / dynamics_.thrust_gain;
  if (dir.head<2>().norm() > 1e-6) {
    double err = std::atan2(dir.y(), dir.x()) - yaw;
    err = std::atan2(std::sin(err), std::cos(err));
    a.yaw = gains_.yaw_gain * err / yawrate_max;
  }
  return a.clamped();
}

}  // namespace gsnav
