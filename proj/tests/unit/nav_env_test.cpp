#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/nav_env.hpp"
#include "gsnav/observation_normalizer.hpp"
#include "gsnav/occupancy_map.hpp"
#include "gsnav/ou_noise.hpp"
#include "gsnav/random.hpp"
#include "gsnav/reward.hpp"

namespace gsnav {
namespace {

using testing::hover_state;

TEST(OuNoise, ZeroSigmaStaysZero) {
  OuNoise n(0.1, {0.0, 0.0});
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto s = n.step(rng);
    ASSERT_EQ(s[0], 0.0);
    ASSERT_EQ(s[1], 0.0);
  }
}

TEST(OuNoise, StationaryStdClosedForm) {
  EXPECT_NEAR(OuNoise::stationary_std(0.1, 0.08), 0.08 / std::sqrt(1 - 0.81), 1e-15);
  EXPECT_NEAR(OuNoise::stationary_std(0.1, 0.08), 0.18353, 1e-5);
}

TEST(OuNoise, RecurrenceFromZero) {
  // One step from zero is exactly one Gaussian draw.
  OuNoise n(0.1, {1.0});
  Rng a(9), b(9);
  const double first = n.step(a)[0];
  EXPECT_DOUBLE_EQ(first, normal(b, 1.0));
  const double second = n.step(a)[0];
  EXPECT_DOUBLE_EQ(second, 0.9 * first + normal(b, 1.0));
}

TEST(OuNoise, ResetZeroesState) {
  OuNoise n(0.1, {1.0, 2.0});
  Rng rng(2);
  n.step(rng);
  n.reset();
  EXPECT_EQ(n.state()[0], 0.0);
  EXPECT_EQ(n.state()[1], 0.0);
}

TEST(OuNoise, RejectsBadTheta) {
  EXPECT_THROW(OuNoise(0.0, {1.0}), ArgumentError);
  EXPECT_THROW(OuNoise(1.0, {1.0}), ArgumentError);
}

TEST(OccupancyMap, SinglePointZeroInflation) {
  const std::vector<Eigen::Vector3d> pts = {{0.05, 0.05, 0.05}};
  const OccupancyMap m = OccupancyMap::build(pts, 0.1, 0.0);
  EXPECT_TRUE(m.occupied(pts[0]));
  EXPECT_GE(m.occupied_count(), 1u);
  EXPECT_LE(m.occupied_count(), 27u);
  EXPECT_FALSE(m.occupied({1.0, 1.0, 1.0}));
}

TEST(OccupancyMap, EmptyMapIsFree) {
  const OccupancyMap m = OccupancyMap::build({}, 0.1, 0.2);
  EXPECT_TRUE(m.empty());
  EXPECT_FALSE(m.occupied({0, 0, 0}));
}

TEST(OccupancyMap, AgreesWithBruteForceDistance) {
  Rng rng(3);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({uniform(rng, 0, 5), uniform(rng, 0, 5), uniform(rng, 0, 2)});
  const double inflation = 0.2;
  const OccupancyMap m = OccupancyMap::build(pts, 0.1, inflation);
  const double slack = 0.5 * std::sqrt(3.0) * 0.1 * 2.0;
  for (int q = 0; q < 10000; ++q) {
    const Eigen::Vector3d p(uniform(rng, -1, 6), uniform(rng, -1, 6), uniform(rng, -1, 3));
    double nearest = 1e9;
    for (const auto& x : pts) nearest = std::min(nearest, (x - p).norm());
    if (nearest <= inflation) EXPECT_TRUE(m.occupied(p)) << nearest;
    if (nearest >= inflation + slack) EXPECT_FALSE(m.occupied(p)) << nearest;
    if (nearest >= 3 * inflation) EXPECT_FALSE(m.occupied(p));
  }
}

TEST(OccupancyMap, OutsideBoundsPolicy) {
  const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}};
  EXPECT_FALSE(OccupancyMap::build(pts, 0.1, 0.1, false).occupied({50, 0, 0}));
  EXPECT_TRUE(OccupancyMap::build(pts, 0.1, 0.1, true).occupied({50, 0, 0}));
}

// -- reward ------------------------------------------------------------------

EpisodeConfig episode() { return EpisodeConfig{}; }

TEST(Reward, HoverAtConstantDistanceIsZero) {
  const QuadState s = hover_state({0, 0, 1});
  const RewardBreakdown r = compute_reward(s, s, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}, episode(), 0.02);
  EXPECT_EQ(r.total, 0.0);
}

TEST(Reward, DistanceTermClamped) {
  const QuadState a = hover_state({0, 0, 1});
  const QuadState b = hover_state({0.1, 0, 1});
  const RewardBreakdown r = compute_reward(a, b, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}, episode(), 0.02);
  EXPECT_NEAR(r.distance, 1.2, 1e-12);
  const RewardBreakdown away = compute_reward(b, a, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}, episode(), 0.02);
  EXPECT_NEAR(away.distance, -1.2, 1e-12);
}

TEST(Reward, VelocityExcess) {
  const QuadState a = hover_state({0, 0, 1});
  QuadState b = a;
  b.velocity = {3, 0, 0};
  const RewardBreakdown r = compute_reward(a, b, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}, episode(), 0.02);
  EXPECT_NEAR(r.velocity_excess, -(std::exp(1.0) - 1.0), 1e-12);
  b.velocity = {10, 0, 0};
  EXPECT_NEAR(compute_reward(a, b, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}, episode(), 0.02).velocity_excess, -5.0, 1e-12);
}

TEST(Reward, CollisionContributesMinusEighty) {
  const QuadState s = hover_state({0, 0, 1});
  const RewardBreakdown r = compute_reward(s, s, Eigen::Vector3d(1, 1, 1), Eigen::Vector3d::Zero(), {true, false}, episode(), 0.02);
  EXPECT_EQ(r.collision, -80.0);
}

TEST(Reward, ActionAndZVelocityTerms) {
  QuadState a = hover_state({0, 0, 1});
  QuadState b = a;
  b.velocity = {0, 0, -0.4};
  const RewardBreakdown r = compute_reward(a, b, Eigen::Vector3d(0.5, -0.5, 0.2), Eigen::Vector3d(0.1, 0.1, 0.1), {}, episode(), 0.02);
  EXPECT_NEAR(r.z_velocity, -0.5 * 0.4, 1e-12);
  EXPECT_NEAR(r.action_magnitude, -0.3 * 0.54, 1e-12);
  EXPECT_NEAR(r.action_change, -0.6 * (0.16 + 0.36 + 0.01), 1e-12);
}

TEST(Reward, BreakdownSumsToTotal) {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    QuadState a = hover_state({uniform(rng, -1, 5), uniform(rng, -1, 1), 1});
    QuadState b = a;
    b.position += Eigen::Vector3d(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), 0);
    b.velocity = {uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -2, 2)};
    const RewardBreakdown r = compute_reward(a, b, Eigen::Vector3d::Random(), Eigen::Vector3d::Random(),
                                             {k % 7 == 0, k % 11 == 0}, episode(), 0.02);
    double sum = 0.0;
    for (double t : r.terms()) sum += t;
    EXPECT_EQ(sum, r.total);
    EXPECT_LE(std::abs(r.distance), 30 * 2.0 * 0.02 + 1e-12);
  }
}

TEST(Termination, PrecedenceAndCases) {
  const EpisodeConfig ep = episode();
  const std::vector<Eigen::Vector3d> wall = {{2, 0, 1}};
  const OccupancyMap map = OccupancyMap::build(wall, 0.1, 0.2);
  EXPECT_EQ(check_termination(hover_state({0, 0, 0.05}), ep, map, 0), Termination::crash_z);
  EXPECT_EQ(check_termination(hover_state({0, 0, 1.8}), ep, map, 0), Termination::crash_z);
  EXPECT_EQ(check_termination(hover_state({2, 0, 1}), ep, map, 0), Termination::collision);
  EXPECT_EQ(check_termination(hover_state({7.8, 0, 1}), ep, map, 0), Termination::success);
  EXPECT_EQ(check_termination(hover_state({0, 0, 1}), ep, map, 512), Termination::timeout);
  EXPECT_EQ(check_termination(hover_state({0, 0, 1}), ep, map, 511), Termination::running);
  EXPECT_EQ(check_termination(hover_state({7.8, 0, 1}), ep, map, 600), Termination::success);
  // Obstacle at the goal: collision outranks success.
  const std::vector<Eigen::Vector3d> at_goal = {{8, 0, 1}};
  EXPECT_EQ(check_termination(hover_state({8, 0, 1}), ep, OccupancyMap::build(at_goal, 0.1, 0.2), 0), Termination::collision);
}

// -- observation --------------------------------------------------------------

TEST(StateVector, LayoutAndNormalization) {
  QuadState q = hover_state({1, 2, 1.2});
  q.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(0.4, Eigen::Vector3d(0.2, 0.1, 1).normalized()));
  q.velocity = {0.3, -0.2, 0.1};
  q.last_action = {0.1, 0.2, 0.3};
  const StateVector s = make_state_vector(q, episode());
  ASSERT_EQ(s.size(), 20u);
  Eigen::Matrix3d R;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R(r, c) = s[3 + 3 * r + c];
  }
  EXPECT_LT((R.transpose() * R - Eigen::Matrix3d::Identity()).norm(), 1e-5);
  const Eigen::Vector3d vb(s[0], s[1], s[2]);
  EXPECT_LT((R * vb - q.velocity).norm(), 1e-12);
  EXPECT_NEAR(Eigen::Vector3d(s[12], s[13], s[14]).norm(), 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(s[15], 1.2);
  EXPECT_DOUBLE_EQ(s[16], 1.0);
  EXPECT_DOUBLE_EQ(s[19], 0.3);
}

TEST(StateVector, IdentityAttitudeBodyVelocity) {
  QuadState q = hover_state({0, 0, 1});
  q.velocity = {1, 0, 0};
  const StateVector s = make_state_vector(q, episode());
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 0.0);
  EXPECT_DOUBLE_EQ(s[2], 0.0);
}

TEST(StateVector, AtGoalDirectionIsZero) {
  const StateVector s = make_state_vector(hover_state({8, 0, 1}), episode());
  EXPECT_EQ(s[12], 0.0);
  EXPECT_EQ(s[13], 0.0);
  EXPECT_EQ(s[14], 0.0);
}

TEST(ObservationNormalizer, WelfordAndClip) {
  ObservationNormalizer n(2, 1e-8, 3.0);
  for (double v : {1.0, 2.0, 3.0, 4.0}) {
    const std::vector<double> x = {v, 10.0};
    n.update(x);
  }
  EXPECT_DOUBLE_EQ(n.mean()[0], 2.5);
  EXPECT_NEAR(n.variance()[0], 1.25, 1e-12);
  const std::vector<double> probe = {2.5 + std::sqrt(1.25), 1000.0};
  const auto z = n.normalize(probe);
  EXPECT_NEAR(z[0], 1.0, 1e-6);
  EXPECT_EQ(z[1], 3.0);
  n.freeze();
  const std::vector<double> big = {100.0, 0.0};
  n.update(big);
  EXPECT_EQ(n.count(), 4u);
}

// -- environment --------------------------------------------------------------

TEST(NavEnv, ObservationShapes) {
  EnvConfig cfg = testing::quiet_env_config();
  NavEnv env(testing::empty_assets(), cfg, 1, 0);
  const EnvObservation o = env.reset();
  EXPECT_EQ(o.rgb.width, 80);
  EXPECT_EQ(o.rgb.height, 60);
  EXPECT_EQ(o.rgb.channels, 3);
  EXPECT_FALSE(o.depth.has_value());
  cfg.privileged = true;
  NavEnv priv(testing::empty_assets(), cfg, 1, 0);
  const EnvObservation p = priv.reset();
  ASSERT_TRUE(p.depth.has_value());
  EXPECT_EQ(p.depth->width, 80);
  EXPECT_EQ(p.depth->height, 60);
}

TEST(NavEnv, ResetStartsInsideFreeRegion) {
  const std::vector<Eigen::Vector3d> obstacles = {{0, 0, 1}, {0.3, 0.3, 0.9}};
  GaussianCloud c = testing::random_cloud(10, 1);
  SceneAssets assets = SceneAssets::make(c, obstacles);
  EnvConfig cfg = testing::quiet_env_config();
  NavEnv env(assets, cfg, 5, 0);
  for (int k = 0; k < 1000; ++k) {
    env.reset();
    const Eigen::Vector3d p = env.state().position;
    ASSERT_FALSE(assets.map->occupied(p));
    ASSERT_TRUE((p.array() >= cfg.episode.start_min.array()).all());
    ASSERT_TRUE((p.array() <= cfg.episode.start_max.array()).all());
    ASSERT_EQ(env.state().velocity, Eigen::Vector3d::Zero());
    ASSERT_NEAR(env.state().euler().x(), 0.0, 1e-12);
    ASSERT_NEAR(env.state().euler().y(), 0.0, 1e-12);
  }
}

TEST(NavEnv, FullyOccupiedStartIsConfigError) {
  std::vector<Eigen::Vector3d> pts;
  for (double x = -0.6; x <= 0.6; x += 0.1) {
    for (double y = -0.6; y <= 0.6; y += 0.1) {
      for (double z = 0.7; z <= 1.3; z += 0.1) pts.push_back({x, y, z});
    }
  }
  NavEnv env(SceneAssets::make(testing::random_cloud(5, 1), pts), testing::quiet_env_config(), 1, 0);
  EXPECT_THROW(env.reset(), ConfigError);
}

TEST(NavEnv, RandomizationDrawsFovInRange) {
  EnvConfig cfg;
  NavEnv env(testing::empty_assets(), cfg, 2, 0);
  for (int k = 0; k < 200; ++k) {
    env.reset();
    ASSERT_GE(env.camera().fov_x_deg(), 67.0 - 1e-9);
    ASSERT_LE(env.camera().fov_x_deg(), 106.0 + 1e-9);
  }
}

TEST(NavEnv, NoiseDoesNotLeakIntoPhysics) {
  EnvConfig noisy = testing::quiet_env_config();
  noisy.perception.enabled = true;
  NavEnv a(testing::empty_assets(), testing::quiet_env_config(), 3, 0);
  NavEnv b(testing::empty_assets(), noisy, 3, 0);
  a.reset();
  b.reset();
  for (int k = 0; k < 50; ++k) {
    const Action act{0.1, 0.05, 0.2, 0.0};
    const StepResult ra = a.step(act);
    const StepResult rb = b.step(act);
    ASSERT_EQ(ra.final_state.position, rb.final_state.position);
    ASSERT_EQ(ra.reward, rb.reward);
  }
}

TEST(NavEnv, HoverHoldsAltitudeWithoutNoise) {
  EnvConfig cfg = testing::quiet_env_config();
  NavEnv env(testing::empty_assets(), cfg, 4, 0);
  env.reset();
  const double z0 = env.state().position.z();
  for (int k = 0; k < 100; ++k) {
    const StepResult r = env.step({});
    ASSERT_EQ(r.termination, Termination::running);
  }
  EXPECT_NEAR(env.state().position.z(), z0, 1e-9);
}

TEST(NavEnv, CrashAutoResets) {
  NavEnv env(testing::empty_assets(), testing::quiet_env_config(), 6, 0);
  env.reset();
  StepResult r;
  int steps = 0;
  do {
    r = env.step({-1, 0, 0, 0});
    ++steps;
  } while (!r.reset && steps < 200);
  EXPECT_EQ(r.termination, Termination::crash_z);
  EXPECT_TRUE(r.terminated());
  EXPECT_FALSE(r.truncated());
  EXPECT_LT(r.final_state.position.z(), 0.1);
  EXPECT_EQ(env.episode_step(), 0);
  EXPECT_EQ(env.episode(), 2u);
  EXPECT_GE(env.state().position.z(), 0.8);
}

TEST(NavEnv, TimeoutIsTruncation) {
  EnvConfig cfg = testing::quiet_env_config();
  cfg.episode.max_steps = 5;
  NavEnv env(testing::empty_assets(), cfg, 7, 0);
  env.reset();
  StepResult r;
  for (int k = 0; k < 5; ++k) r = env.step({});
  EXPECT_EQ(r.termination, Termination::timeout);
  EXPECT_TRUE(r.truncated());
  EXPECT_TRUE(r.reset);
}

TEST(StepBatch, SingleEnvEqualsStep) {
  EnvConfig cfg;
  NavEnv a(testing::empty_assets(), cfg, 8, 3);
  NavEnv b(testing::empty_assets(), cfg, 8, 3);
  a.reset();
  std::vector<NavEnv> batch;
  batch.push_back(b);
  reset_batch(batch, 1);
  for (int k = 0; k < 20; ++k) {
    const Action act{0.2, -0.1, 0.3, 0.1};
    const StepResult r1 = a.step(act);
    const auto r2 = step_batch(batch, std::span<const Action>(&act, 1), 1);
    ASSERT_EQ(r1.reward, r2[0].reward);
    ASSERT_EQ(r1.observation.state, r2[0].observation.state);
    ASSERT_EQ(r1.observation.rgb.data, r2[0].observation.rgb.data);
  }
}

TEST(StepBatch, PermutationPermutesOutputs) {
  EnvConfig cfg;
  const SceneAssets assets = testing::empty_assets();
  std::vector<NavEnv> fwd, rev;
  for (int i = 0; i < 4; ++i) fwd.emplace_back(assets, cfg, 9, i);
  for (int i = 3; i >= 0; --i) rev.emplace_back(assets, cfg, 9, i);
  reset_batch(fwd, 2);
  reset_batch(rev, 1);
  for (int k = 0; k < 10; ++k) {
    std::vector<Action> af, ar;
    for (int i = 0; i < 4; ++i) af.push_back({0.1 * i, 0.05 * k, -0.1, 0.2});
    for (int i = 3; i >= 0; --i) ar.push_back(af[i]);
    const auto rf = step_batch(fwd, af, 2);
    const auto rr = step_batch(rev, ar, 1);
    for (int i = 0; i < 4; ++i) {
      ASSERT_EQ(rf[i].reward, rr[3 - i].reward);
      ASSERT_EQ(rf[i].observation.state, rr[3 - i].observation.state);
    }
  }
}

TEST(StepBatch, RejectsBadInput) {
  std::vector<NavEnv> envs;
  envs.emplace_back(testing::empty_assets(), EnvConfig{}, 1, 0);
  reset_batch(envs);
  const std::vector<Action> two(2);
  EXPECT_THROW(step_batch(envs, two), ArgumentError);
  const std::vector<Action> bad = {{std::nan(""), 0, 0, 0}};
  const QuadState before = envs[0].state();
  EXPECT_THROW(step_batch(envs, bad), ArgumentError);
  EXPECT_EQ(envs[0].state().position, before.position);
  std::vector<NavEnv> none;
  EXPECT_THROW(step_batch(none, {}), ArgumentError);
}

TEST(StepBatch, FaultIsolatedToOneEnv) {
  const SceneAssets assets = testing::empty_assets();
  std::vector<NavEnv> envs;
  for (int i = 0; i < 3; ++i) envs.emplace_back(assets, testing::quiet_env_config(), 10, i);
  reset_batch(envs, 1);
  QuadState broken = envs[1].state();
  broken.angular_velocity.x() = std::nan("");
  envs[1].set_state(broken);
  const std::vector<Action> acts(3);
  const auto r = step_batch(envs, acts, 1);
  EXPECT_EQ(r[1].termination, Termination::fault);
  EXPECT_FALSE(r[1].fault.empty());
  EXPECT_TRUE(r[1].reset);
  EXPECT_EQ(r[0].termination, Termination::running);
  EXPECT_EQ(r[2].termination, Termination::running);
}

}  // namespace
}  // namespace gsnav
