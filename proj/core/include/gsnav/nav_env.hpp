#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsnav/camera.hpp"
#include "gsnav/flight_dynamics.hpp"
#include "gsnav/gaussian_cloud.hpp"
#include "gsnav/occupancy_map.hpp"
#include "gsnav/ou_noise.hpp"
#include "gsnav/random.hpp"
#include "gsnav/rasterizer.hpp"
#include "gsnav/reward.hpp"

namespace gsnav {

inline constexpr int kStateDim = 20;
using StateVector = std::array<double, kStateDim>;

/// Offsets of the state vector blocks: v_b, R (row-major), d_g, z_c, z_t, a_last.
struct StateLayout {
  static constexpr int velocity = 0;
  static constexpr int rotation = 3;
  static constexpr int direction = 12;
  static constexpr int altitude = 15;
  static constexpr int target_altitude = 16;
  static constexpr int last_action = 17;
};

struct EnvObservation {
  Image rgb;                   ///< height x width x 3, values in [0, 1]
  std::optional<Image> depth;  ///< privileged mode only, meters
  StateVector state{};
};

/// Visual randomization drawn per environment at every reset.
struct VisualRandomization {
  bool colors = true;
  ColorRandomizationRanges color;
  bool fov = true;
  double fov_min_deg = 67.0;
  double fov_max_deg = 106.0;
};

struct EnvConfig {
  EpisodeConfig episode;
  DynamicsParams dynamics;
  LatencyConfig latency;
  PerceptionNoiseConfig perception;
  VisualRandomization visual;
  int width = 80;
  int height = 60;
  double fov_deg = 90.0;  ///< used when FOV randomization is off
  double mount_pitch_deg = 0.0;
  bool privileged = false;
  /// Uniform start yaw range is [-yaw_range, yaw_range] (degrees).
  double start_yaw_range_deg = 180.0;
  int max_reset_tries = 1000;
  RenderSettings render;

  void validate() const;
};

/// Scene data shared read-only by every environment.
struct SceneAssets {
  std::shared_ptr<const GaussianCloud> cloud;
  std::shared_ptr<const OccupancyMap> map;

  /// Builds the occupancy map from `collision_points` (or the cloud's
  /// Gaussian means above `opacity_min` when empty).
  static SceneAssets make(GaussianCloud cloud, std::vector<Eigen::Vector3d> collision_points = {},
                          double voxel = 0.1, double inflation = 0.2, double opacity_min = 0.1);
};

/// Ground-truth quantities of the state vector without perception noise.
StateVector make_state_vector(const QuadState& quad, const EpisodeConfig& episode,
                              const PerceptionOffsets& offsets = {});

struct StepResult {
  EnvObservation observation;
  double reward = 0.0;
  RewardBreakdown breakdown;
  Termination termination = Termination::running;
  bool reset = false;  ///< the env was auto-reset; `observation` starts the next episode
  std::string fault;   ///< non-empty when the step faulted
  Action applied;      ///< action after latency and noise
  QuadState final_state;  ///< state at the end of the step, before any auto-reset
  int episode_step = 0;   ///< step count of the episode the step belonged to
  std::uint64_t episode = 0;

  bool terminated() const {
    return termination == Termination::crash_z || termination == Termination::collision ||
           termination == Termination::success || termination == Termination::fault;
  }
  bool truncated() const { return termination == Termination::timeout; }
};

/// One navigation environment with its own random streams, so its
/// trajectory depends only on (seed, env_id) and its action sequence.
class NavEnv {
 public:
  NavEnv(SceneAssets assets, EnvConfig config, std::uint64_t seed, std::uint64_t env_id);

  EnvObservation reset();
  StepResult step(const Action& action);

  const QuadState& state() const { return quad_; }
  const EnvConfig& config() const { return config_; }
  const CameraModel& camera() const { return camera_; }
  const GaussianCloud& cloud() const { return *cloud_; }
  const SceneAssets& assets() const { return assets_; }
  std::uint64_t env_id() const { return env_id_; }
  std::uint64_t episode() const { return episode_; }
  int episode_step() const { return step_; }
  const LatencyModel& latency() const { return latency_; }
  Pose camera_pose() const;

  /// Replaces the drone state (tests and scripted scenarios).
  void set_state(const QuadState& quad) { quad_ = quad; }

  // Batched stepping phases, used by step_batch.
  void begin_reset();
  void advance(const Action& action, StepResult& out);
  RenderJob render_job() const;
  EnvObservation assemble(RenderOutput&& render);

 private:
  SceneAssets assets_;
  EnvConfig config_;
  std::uint64_t seed_;
  std::uint64_t env_id_;
  Rng reset_rng_;
  Rng dynamics_rng_;
  Rng obs_rng_;
  std::shared_ptr<const GaussianCloud> cloud_;
  CameraModel camera_;
  QuadState quad_;
  LatencyModel latency_;
  PerceptionNoise perception_;
  int step_ = 0;
  std::uint64_t episode_ = 0;
};

/// Advances every env by one control step. Physics runs in parallel, images
/// come from one render_batch call, and terminated envs auto-reset. A fault
/// in one env is reported in its result and does not affect the others.
std::vector<StepResult> step_batch(std::span<NavEnv> envs, std::span<const Action> actions,
                                   unsigned threads = 0);

/// Resets every env and renders the initial observations in one batch.
std::vector<EnvObservation> reset_batch(std::span<NavEnv> envs, unsigned threads = 0);

}  // namespace gsnav
