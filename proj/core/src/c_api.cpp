#include "gsnav/c_api.h"

#include <cmath>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "gsnav/config.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/nav_env.hpp"
#include "gsnav/scene_bundle.hpp"

struct gsnav_vec_env {
  std::vector<gsnav::NavEnv> envs;
  gsnav_spaces spaces{};
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return GSNAV_OK;
  } catch (const gsnav::ConfigError& e) {
    g_last_error = e.what();
    return GSNAV_CONFIG_ERROR;
  } catch (const gsnav::ParseError& e) {
    g_last_error = e.what();
    return GSNAV_CONFIG_ERROR;
  } catch (const gsnav::LoadError& e) {
    g_last_error = e.what();
    return GSNAV_CONFIG_ERROR;
  } catch (const gsnav::ArgumentError& e) {
    g_last_error = e.what();
    return GSNAV_CONFIG_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GSNAV_RUNTIME_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return GSNAV_RUNTIME_ERROR;
  }
}

void export_obs(const gsnav_vec_env& h, std::size_t i, const gsnav::EnvObservation& obs, float* rgb,
                float* depth, double* state) {
  const std::size_t pixels = static_cast<std::size_t>(h.spaces.height) * h.spaces.width;
  if (rgb) {
    float* dst = rgb + i * pixels * 3;
    for (std::size_t k = 0; k < pixels * 3; ++k) dst[k] = static_cast<float>(obs.rgb.data[k]);
  }
  if (depth && obs.depth) {
    float* dst = depth + i * pixels;
    for (std::size_t k = 0; k < pixels; ++k) dst[k] = static_cast<float>(obs.depth->data[k]);
  }
  if (state) {
    for (int k = 0; k < gsnav::kStateDim; ++k) state[i * gsnav::kStateDim + k] = obs.state[k];
  }
}

}  // namespace

extern "C" {

const char* gsnav_api_version(void) { return GSNAV_API_VERSION; }

const char* gsnav_last_error(void) { return g_last_error.c_str(); }

int gsnav_vec_env_make(const char* config_path, int32_t n_envs, uint64_t seed, int32_t privileged,
                       gsnav_vec_env** out) {
  return guarded([&] {
    if (!out) throw gsnav::ArgumentError("output handle pointer is null");
    *out = nullptr;
    if (n_envs < 1) throw gsnav::ArgumentError("n_envs must be >= 1");
    gsnav::EngineConfig config =
        config_path ? gsnav::load_config(config_path) : gsnav::EngineConfig{};
    config.env.privileged = privileged != 0;
    const gsnav::LoadedScene scene = gsnav::load_scene(config, seed);
    const gsnav::SceneAssets assets = gsnav::make_assets(scene, config.scene);
    auto handle = std::make_unique<gsnav_vec_env>();
    handle->envs.reserve(static_cast<std::size_t>(n_envs));
    for (int32_t i = 0; i < n_envs; ++i) handle->envs.emplace_back(assets, scene.env, seed, i);
    handle->spaces = {n_envs, scene.env.height, scene.env.width, 3, gsnav::kStateDim, 4,
                      scene.env.privileged ? 1 : 0};
    *out = handle.release();
  });
}

void gsnav_vec_env_destroy(gsnav_vec_env* env) { delete env; }

int gsnav_vec_env_spaces(const gsnav_vec_env* env, gsnav_spaces* out) {
  return guarded([&] {
    if (!env || !out) throw gsnav::ArgumentError("null handle");
    *out = env->spaces;
  });
}

int gsnav_vec_env_reset(gsnav_vec_env* env, float* rgb, float* depth, double* state) {
  return guarded([&] {
    if (!env) throw gsnav::ArgumentError("null handle");
    const auto obs = gsnav::reset_batch(env->envs);
    for (std::size_t i = 0; i < obs.size(); ++i) export_obs(*env, i, obs[i], rgb, depth, state);
  });
}

int gsnav_vec_env_step(gsnav_vec_env* env, const double* actions, size_t action_count, float* rgb,
                       float* depth, double* state, double* reward, uint8_t* terminated,
                       uint8_t* truncated, uint8_t* reset_flags) {
  return guarded([&] {
    if (!env || !actions) throw gsnav::ArgumentError("null handle or actions");
    const std::size_t n = env->envs.size();
    if (action_count != n * 4) {
      throw gsnav::ArgumentError("actions must have shape (" + std::to_string(n) + ", 4), got " +
                                 std::to_string(action_count) + " values");
    }
    std::vector<gsnav::Action> acts(n);
    for (std::size_t i = 0; i < n; ++i) {
      acts[i] = {actions[4 * i], actions[4 * i + 1], actions[4 * i + 2], actions[4 * i + 3]};
    }
    const auto results = gsnav::step_batch(env->envs, acts);
    for (std::size_t i = 0; i < n; ++i) {
      export_obs(*env, i, results[i].observation, rgb, depth, state);
      if (reward) reward[i] = results[i].reward;
      if (terminated) terminated[i] = results[i].terminated() ? 1 : 0;
      if (truncated) truncated[i] = results[i].truncated() ? 1 : 0;
      if (reset_flags) reset_flags[i] = results[i].reset ? 1 : 0;
    }
  });
}

}  // extern "C"
