#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gsnav/flight_dynamics.hpp"
#include "gsnav/nav_env.hpp"
#include "gsnav/random.hpp"
#include "gsnav/reward.hpp"

namespace gsnav {

enum class PolicyKind { hover, go_to, random };

PolicyKind parse_policy(std::string_view name);
std::string_view to_string(PolicyKind kind);

struct GotoGains {
  double cruise_speed = 1.0;    ///< m/s toward the goal
  double velocity_gain = 1.5;   ///< (m/s^2) per (m/s) of velocity error
  double altitude_gain = 1.5;   ///< (m/s) per m of altitude error
  double climb_gain = 3.0;      ///< (m/s^2) per (m/s) of vertical speed error
  double yaw_gain = 1.5;        ///< (rad/s) per rad of heading error
};

/// Scripted stand-ins for a learned actor. They read only the observation
/// state vector, so perception noise reaches them as it would a policy.
class ScriptedPolicy {
 public:
  ScriptedPolicy(PolicyKind kind, const DynamicsParams& dynamics, std::uint64_t seed,
                 std::uint64_t env_id, GotoGains gains = {});

  Action act(const StateVector& state);
  PolicyKind kind() const { return kind_; }

 private:
  PolicyKind kind_;
  DynamicsParams dynamics_;
  GotoGains gains_;
  Rng rng_;
};

}  // namespace gsnav
