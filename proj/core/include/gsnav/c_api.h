#ifndef GSNAV_C_API_H
#define GSNAV_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GSNAV_API_VERSION "gsnav-vecenv/1.0"

enum gsnav_status { GSNAV_OK = 0, GSNAV_RUNTIME_ERROR = 1, GSNAV_CONFIG_ERROR = 2 };

typedef struct gsnav_vec_env gsnav_vec_env;

typedef struct gsnav_spaces {
  int32_t n_envs;
  int32_t height;
  int32_t width;
  int32_t rgb_channels;  /* 3 */
  int32_t state_dim;     /* 20 */
  int32_t action_dim;    /* 4, each in [-1, 1] */
  int32_t has_depth;     /* privileged mode */
} gsnav_spaces;

const char* gsnav_api_version(void);

/* Message of the last failed call on this thread ("" if none). */
const char* gsnav_last_error(void);

/* config_path may be NULL for built-in defaults. */
int gsnav_vec_env_make(const char* config_path, int32_t n_envs, uint64_t seed, int32_t privileged,
                       gsnav_vec_env** out);
void gsnav_vec_env_destroy(gsnav_vec_env* env);
int gsnav_vec_env_spaces(const gsnav_vec_env* env, gsnav_spaces* out);

/* Output buffers are caller-owned and filled with one bulk copy:
 * rgb   n * height * width * 3 floats (HWC, [0, 1])
 * depth n * height * width floats (may be NULL; ignored without depth)
 * state n * 20 doubles */
int gsnav_vec_env_reset(gsnav_vec_env* env, float* rgb, float* depth, double* state);

/* actions: n * 4 doubles. terminated / truncated / reset_flags: n bytes each.
 * Shape problems are rejected before any environment advances. */
int gsnav_vec_env_step(gsnav_vec_env* env, const double* actions, size_t action_count, float* rgb,
                       float* depth, double* state, double* reward, uint8_t* terminated,
                       uint8_t* truncated, uint8_t* reset_flags);

#ifdef __cplusplus
}
#endif

#endif
