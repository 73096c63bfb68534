#pragma once

#include <filesystem>
#include <string>

#include "gsnav/da_demo.hpp"
#include "gsnav/gaussian_cloud.hpp"
#include "gsnav/nav_env.hpp"

namespace gsnav {

enum class SceneSource { ply, bundle, random, pillars };

struct SceneConfig {
  SceneSource source = SceneSource::pillars;
  std::filesystem::path ply;     ///< 3DGS model (source = ply)
  std::filesystem::path points;  ///< optional collision cloud
  std::filesystem::path bundle;  ///< scene bundle directory (source = bundle)
  std::size_t synthetic_count = 10000;  ///< Gaussians for source = random
  double synthetic_anisotropy = 0.0;    ///< per-axis log-scale spread for source = random
  int pillars = 12;                     ///< pillar count for source = pillars
  SceneTransform transform;
  double collision_opacity_min = 0.1;
  double voxel = 0.1;
  double inflation = 0.2;
};

/// Everything the engine reads from a config file. Defaults reproduce the
/// training-time randomization table.
struct EngineConfig {
  SceneConfig scene;
  EnvConfig env;
  DaDemoOptions da;

  void validate() const;
};

/// Sectioned key = value text. `#` starts a comment, vectors are comma
/// separated, unknown sections or keys are rejected with ConfigError.
/// Relative paths resolve against `base_dir`.
EngineConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                          const std::filesystem::path& base_dir = {});
EngineConfig load_config(const std::filesystem::path& path);

/// Renders every key with its current value; parse_config(to_config_text(c)) == c.
std::string to_config_text(const EngineConfig& config);

}  // namespace gsnav
