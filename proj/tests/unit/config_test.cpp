#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gsnav/c_api.h"
#include "gsnav/config.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/ply_io.hpp"
#include "gsnav/scene_bundle.hpp"

namespace gsnav {
namespace {

TEST(Config, DefaultsMatchTrainingRanges) {
  const EngineConfig c;
  EXPECT_EQ(c.env.width, 80);
  EXPECT_EQ(c.env.height, 60);
  EXPECT_DOUBLE_EQ(c.env.visual.color.alpha_min, 0.8);
  EXPECT_DOUBLE_EQ(c.env.visual.color.alpha_max, 1.3);
  EXPECT_DOUBLE_EQ(c.env.visual.color.beta_min, -0.05);
  EXPECT_DOUBLE_EQ(c.env.visual.color.beta_max, 0.05);
  EXPECT_DOUBLE_EQ(c.env.visual.fov_min_deg, 67.0);
  EXPECT_DOUBLE_EQ(c.env.visual.fov_max_deg, 106.0);
  EXPECT_DOUBLE_EQ(c.env.latency.delay_max_ms, 80.0);
  EXPECT_DOUBLE_EQ(c.env.latency.interval_min_ms, 10.0);
  EXPECT_DOUBLE_EQ(c.env.latency.interval_max_ms, 100.0);
  EXPECT_DOUBLE_EQ(c.env.dynamics.dt_control(), 0.02);
}

TEST(Config, ParsesSectionsCommentsAndVectors) {
  const EngineConfig c = parse_config(
      "# comment\n"
      "[camera]\n"
      "width = 64   # trailing\n"
      "binning = square\n"
      "[env]\n"
      "goal = 5, 1, 1.5\n"
      "privileged = true\n"
      "[da]\n"
      "encoder_hidden = 32, 16\n");
  EXPECT_EQ(c.env.width, 64);
  EXPECT_EQ(c.env.render.binning, Binning::square);
  EXPECT_EQ(c.env.episode.goal, Eigen::Vector3d(5, 1, 1.5));
  EXPECT_TRUE(c.env.privileged);
  EXPECT_EQ(c.da.network.encoder_hidden, (std::vector<int>{32, 16}));
}

TEST(Config, UnknownKeyRejectedWithLocation) {
  try {
    parse_config("[camera]\nwidth = 10\nwidht = 3\n", "x.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("x.cfg:3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("widht"), std::string::npos);
  }
  EXPECT_THROW(parse_config("[nope]\n"), ConfigError);
  EXPECT_THROW(parse_config("width = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[camera]\nwidth\n"), ConfigError);
}

TEST(Config, BadValuesRejected) {
  EXPECT_THROW(parse_config("[camera]\nwidth = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[camera]\nfov = 1e999\n"), ConfigError);
  EXPECT_THROW(parse_config("[env]\ngoal = 1, 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[env]\nprivileged = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("[scene]\nscale = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[scene]\npillars = -2\n"), ConfigError);
  EXPECT_THROW(parse_config("[scene]\nsource = ply\n"), ConfigError);
  EXPECT_THROW(parse_config("[scene]\nfov_min = 120\nfov_max = 100\n"), ConfigError);
}

TEST(Config, TextRoundTrip) {
  EngineConfig c;
  c.env.width = 40;
  c.env.episode.goal = {3.25, -0.5, 1.125};
  c.scene.transform.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ()));
  c.da.network.encoder_hidden = {12, 7};
  c.env.latency.resample = false;
  const std::string text = to_config_text(c);
  const EngineConfig back = parse_config(text);
  EXPECT_EQ(to_config_text(back), text);
  EXPECT_EQ(back.env.width, 40);
  EXPECT_EQ(back.env.episode.goal, c.env.episode.goal);
  EXPECT_FALSE(back.env.latency.resample);
  EXPECT_NEAR(back.scene.transform.rotation.angularDistance(c.scene.transform.rotation), 0.0, 1e-9);
}

TEST(Config, MissingFileNamesPath) {
  try {
    load_config("/nonexistent/dir/engine.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/engine.cfg"), std::string::npos);
  }
}

TEST(Config, RelativePathsResolveAgainstFile) {
  const auto dir = testing::scratch_dir("cfg_rel");
  std::ofstream(dir / "a.cfg") << "[scene]\nsource = ply\nply = model.ply\n";
  EXPECT_EQ(load_config(dir / "a.cfg").scene.ply, dir / "model.ply");
}

TEST(SceneBundle, RoundTripAppliesTransform) {
  const auto dir = testing::scratch_dir("bundle");
  const GaussianCloud cloud = testing::random_cloud(30, 3);
  const std::vector<Eigen::Vector3d> pts = {{1, 2, 3}, {0, 0, 0}};
  SceneTransform t;
  t.scale = 2.0;
  t.translation = {1, 0, -1};
  EpisodeConfig ep;
  ep.goal = {4, 0, 1};
  ep.start_min = {-1, -1, 0.9};
  ep.start_max = {-0.5, 1, 1.1};
  save_scene_bundle(dir, cloud, &pts, t, ep);
  const SceneBundle b = load_scene_bundle(dir);
  ASSERT_EQ(b.cloud.size(), 30u);
  EXPECT_LT((b.cloud.means[4] - (2.0f * cloud.means[4] + Eigen::Vector3f(1, 0, -1))).norm(), 1e-5);
  ASSERT_TRUE(b.points.has_value());
  EXPECT_LT(((*b.points)[0] - Eigen::Vector3d(3, 4, 5)).norm(), 1e-6);
  EXPECT_EQ(b.goal, ep.goal);
  EXPECT_EQ(b.start_min, ep.start_min);
  EXPECT_EQ(b.start_max, ep.start_max);

  EngineConfig c;
  c.scene.source = SceneSource::bundle;
  c.scene.bundle = dir;
  const LoadedScene s = load_scene(c, 0);
  EXPECT_EQ(s.env.episode.goal, ep.goal);
  EXPECT_EQ(s.collision_points.size(), 2u);
}

TEST(SceneBundle, MissingDirectoryIsLoadError) {
  EXPECT_THROW(load_scene_bundle("/nonexistent/bundle"), LoadError);
}

TEST(LoadScene, SyntheticSourcesAreSeeded) {
  EngineConfig c;
  c.scene.source = SceneSource::random;
  c.scene.synthetic_count = 500;
  const LoadedScene a = load_scene(c, 4);
  const LoadedScene b = load_scene(c, 4);
  const LoadedScene other = load_scene(c, 5);
  ASSERT_EQ(a.cloud.size(), 500u);
  EXPECT_EQ(a.cloud.means, b.cloud.means);
  EXPECT_NE(a.cloud.means, other.cloud.means);
  c.scene.source = SceneSource::pillars;
  EXPECT_FALSE(load_scene(c, 4).cloud.empty());
}

TEST(LoadScene, PillarsKeepStartRegionFree) {
  EngineConfig c;
  const LoadedScene s = load_scene(c, 1);
  const SceneAssets assets = make_assets(s, c.scene);
  const Eigen::Vector3d centre = 0.5 * (c.env.episode.start_min + c.env.episode.start_max);
  EXPECT_FALSE(assets.map->occupied(centre));
  EXPECT_FALSE(assets.map->occupied(c.env.episode.goal));
}

// -- C API ------------------------------------------------------------------------

std::filesystem::path small_config(const std::string& name) {
  const auto dir = testing::scratch_dir(name);
  std::ofstream(dir / "env.cfg") << "[scene]\nsource = random\nsynthetic_count = 300\n"
                                    "[camera]\nwidth = 32\nheight = 24\n";
  return dir / "env.cfg";
}

TEST(CApi, VersionString) { EXPECT_STREQ(gsnav_api_version(), GSNAV_API_VERSION); }

TEST(CApi, InvalidPathNamesPath) {
  gsnav_vec_env* env = nullptr;
  EXPECT_EQ(gsnav_vec_env_make("/no/such/env.cfg", 2, 0, 0, &env), GSNAV_CONFIG_ERROR);
  EXPECT_EQ(env, nullptr);
  EXPECT_NE(std::string(gsnav_last_error()).find("/no/such/env.cfg"), std::string::npos);
  EXPECT_EQ(gsnav_vec_env_make(nullptr, 0, 0, 0, &env), GSNAV_CONFIG_ERROR);
}

struct Rollout {
  std::vector<float> rgb;
  std::vector<double> state;
  std::vector<double> reward;
};

Rollout run_c(const std::string& cfg, std::uint64_t seed, int privileged, int steps) {
  gsnav_vec_env* env = nullptr;
  EXPECT_EQ(gsnav_vec_env_make(cfg.c_str(), 3, seed, privileged, &env), GSNAV_OK) << gsnav_last_error();
  gsnav_spaces sp{};
  EXPECT_EQ(gsnav_vec_env_spaces(env, &sp), GSNAV_OK);
  EXPECT_EQ(sp.n_envs, 3);
  EXPECT_EQ(sp.width, 32);
  EXPECT_EQ(sp.height, 24);
  EXPECT_EQ(sp.state_dim, 20);
  EXPECT_EQ(sp.action_dim, 4);
  EXPECT_EQ(sp.has_depth, privileged);
  const std::size_t px = static_cast<std::size_t>(sp.width * sp.height);
  Rollout r;
  r.rgb.assign(3 * px * 3, -1.0f);
  std::vector<float> depth(3 * px, -1.0f);
  r.state.assign(3 * 20, 0.0);
  EXPECT_EQ(gsnav_vec_env_reset(env, r.rgb.data(), depth.data(), r.state.data()), GSNAV_OK);
  std::vector<double> actions(12);
  std::vector<double> rew(3);
  std::vector<std::uint8_t> term(3), trunc(3), reset(3);
  for (int k = 0; k < steps; ++k) {
    for (int i = 0; i < 12; ++i) actions[i] = 0.3 * std::sin(0.1 * k + i);
    EXPECT_EQ(gsnav_vec_env_step(env, actions.data(), actions.size(), r.rgb.data(), depth.data(),
                                 r.state.data(), rew.data(), term.data(), trunc.data(), reset.data()),
              GSNAV_OK);
    r.reward.insert(r.reward.end(), rew.begin(), rew.end());
  }
  for (float v : r.rgb) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
  if (privileged) {
    for (float v : depth) EXPECT_GT(v, 0.0f);
  }
  // A short action buffer is rejected without advancing anything.
  EXPECT_EQ(gsnav_vec_env_step(env, actions.data(), 8, r.rgb.data(), nullptr, r.state.data(), rew.data(),
                               term.data(), trunc.data(), reset.data()),
            GSNAV_CONFIG_ERROR);
  EXPECT_NE(std::string(gsnav_last_error()).find("action"), std::string::npos);
  gsnav_vec_env_destroy(env);
  return r;
}

TEST(CApi, SameSeedIsDeterministic) {
  const auto cfg = small_config("capi");
  const Rollout a = run_c(cfg.string(), 11, 0, 10);
  const Rollout b = run_c(cfg.string(), 11, 0, 10);
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.state, b.state);
  EXPECT_EQ(a.reward, b.reward);
  const Rollout c = run_c(cfg.string(), 12, 0, 10);
  EXPECT_NE(a.state, c.state);
}

TEST(CApi, PrivilegedDepth) {
  const auto cfg = small_config("capi_priv");
  run_c(cfg.string(), 3, 1, 2);
}

}  // namespace
}  // namespace gsnav
