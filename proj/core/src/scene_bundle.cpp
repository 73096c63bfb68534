#include "gsnav/scene_bundle.hpp"

#include <fstream>

#include "gsnav/errors.hpp"
#include "gsnav/ply_io.hpp"
#include "gsnav/synthetic_scene.hpp"

namespace gsnav {

namespace {

std::vector<Eigen::Vector3d> transform_points(const std::vector<Eigen::Vector3d>& pts,
                                              const SceneTransform& t) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(t.apply(p));
  return out;
}

}  // namespace

SceneBundle load_scene_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw LoadError("scene bundle is not a directory: " + dir.string());
  const EngineConfig cfg = load_config(dir / "scene.cfg");
  SceneBundle b;
  b.transform = cfg.scene.transform;
  b.cloud = apply_transform(load_ply(dir / "scene.ply"), b.transform);
  const auto points_path = dir / "points.ply";
  if (std::filesystem::exists(points_path)) b.points = transform_points(load_points_ply(points_path), b.transform);
  b.start_min = cfg.env.episode.start_min;
  b.start_max = cfg.env.episode.start_max;
  b.goal = cfg.env.episode.goal;
  return b;
}

void save_scene_bundle(const std::filesystem::path& dir, const GaussianCloud& cloud,
                       const std::vector<Eigen::Vector3d>* points, const SceneTransform& transform,
                       const EpisodeConfig& episode) {
  std::filesystem::create_directories(dir);
  save_ply(cloud, dir / "scene.ply");
  if (points) save_points_ply(*points, dir / "points.ply");
  EngineConfig cfg;
  cfg.scene.transform = transform;
  cfg.env.episode.start_min = episode.start_min;
  cfg.env.episode.start_max = episode.start_max;
  cfg.env.episode.goal = episode.goal;
  // Only the bundle keys are written.
  const std::string full = to_config_text(cfg);
  std::ofstream out(dir / "scene.cfg");
  if (!out) throw LoadError("cannot write " + (dir / "scene.cfg").string());
  auto line_of = [&full](const std::string& key) {
    const auto pos = full.find("\n" + key + " = ");
    const auto end = full.find('\n', pos + 1);
    return full.substr(pos + 1, end - pos - 1);
  };
  out << "[scene]\n" << line_of("scale") << "\n" << line_of("rotation") << "\n" << line_of("translation") << "\n\n";
  out << "[env]\n" << line_of("goal") << "\n" << line_of("start_min") << "\n" << line_of("start_max") << "\n";
}

LoadedScene load_scene(const EngineConfig& config, std::uint64_t seed) {
  LoadedScene s;
  s.env = config.env;
  const SceneConfig& sc = config.scene;
  switch (sc.source) {
    case SceneSource::ply:
      s.cloud = apply_transform(load_ply(sc.ply), sc.transform);
      break;
    case SceneSource::bundle: {
      SceneBundle b = load_scene_bundle(sc.bundle);
      s.cloud = std::move(b.cloud);
      if (b.points) s.collision_points = std::move(*b.points);
      s.env.episode.start_min = b.start_min;
      s.env.episode.start_max = b.start_max;
      s.env.episode.goal = b.goal;
      s.env.validate();
      break;
    }
    case SceneSource::random: {
      RandomSceneOptions opts;
      opts.count = sc.synthetic_count;
      opts.anisotropy = sc.synthetic_anisotropy;
      // A slab ahead of the default start region, in the z-up world.
      opts.box_min = {1.0, -2.5, 0.0};
      opts.box_max = {9.0, 2.5, 2.0};
      s.cloud = apply_transform(make_random_scene(opts, derive_seed(seed, "scene")), sc.transform);
      break;
    }
    case SceneSource::pillars: {
      PillarForestOptions opts;
      opts.pillars = sc.pillars;
      opts.keep_clear = {0.5 * (s.env.episode.start_min + s.env.episode.start_max), s.env.episode.goal};
      s.cloud = apply_transform(make_pillar_forest(opts, derive_seed(seed, "scene")), sc.transform);
      break;
    }
  }
  if (!sc.points.empty() && sc.source != SceneSource::bundle) {
    s.collision_points = transform_points(load_points_ply(sc.points), sc.transform);
  }
  return s;
}

SceneAssets make_assets(const LoadedScene& scene, const SceneConfig& config) {
  return SceneAssets::make(scene.cloud, scene.collision_points, config.voxel, config.inflation,
                           config.collision_opacity_min);
}

}  // namespace gsnav
