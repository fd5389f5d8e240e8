/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the RBF-FD Poisson solver and experiment harness.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Every fallible call returns an
 * rbffd_status; on failure a description of the most recent error on the
 * calling thread is available from rbffd_last_error().
 */
#ifndef RBFFD_RBFFD_H
#define RBFFD_RBFFD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RBFFD_API __declspec(dllexport)
#else
#define RBFFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbffd_status {
  RBFFD_OK = 0,
  RBFFD_ERR_INVALID_ARGUMENT = 1,
  RBFFD_ERR_BOUNDARY_TOO_COARSE = 2,
  RBFFD_ERR_EMPTY_NODE_SET = 3,
  RBFFD_ERR_K_TOO_LARGE = 4,
  RBFFD_ERR_INSUFFICIENT_STENCIL = 5,
  RBFFD_ERR_SINGULAR_SYSTEM = 6,
  RBFFD_ERR_MISSING_WEIGHTS = 7,
  RBFFD_ERR_NOT_CONVERGED = 8,
  RBFFD_ERR_BREAKDOWN = 9,
  RBFFD_ERR_TOO_LARGE_FOR_DENSE = 10,
  RBFFD_ERR_SINGULAR_MATRIX = 11,
  RBFFD_ERR_EMPTY_INTERIOR = 12,
  RBFFD_ERR_TOO_SHORT = 13,
  RBFFD_ERR_TOO_FEW_POINTS = 14,
  RBFFD_ERR_IO = 15,
  RBFFD_ERR_INTERNAL = 99
} rbffd_status;

typedef enum rbffd_experiment {
  RBFFD_EXPERIMENT_SOLVE = 0,
  RBFFD_EXPERIMENT_SWEEP = 1,
  RBFFD_EXPERIMENT_CONVERGE = 2,
  RBFFD_EXPERIMENT_SPLIT = 3,
  RBFFD_EXPERIMENT_SIGNFIELD = 4
} rbffd_experiment;

typedef enum rbffd_row_mode {
  RBFFD_MODE_UNIFORM = 0, /* solve, sweep, converge, signfield rows */
  RBFFD_MODE_BASELINE = 1,
  RBFFD_MODE_NEAR_FIXED = 2,
  RBFFD_MODE_FAR_FIXED = 3
} rbffd_row_mode;

/* One evaluated configuration. Metric fields are NaN when ok == 0. */
typedef struct rbffd_row {
  int n;
  double h;
  int mode; /* rbffd_row_mode */
  double e_poiss_max;
  double e_poiss_avg;
  double e_lap_max;
  double e_lap_avg;
  double dN_poiss;
  double dN_lap;
  int iterations;
  double residual;
  int ok;
} rbffd_row;

typedef struct rbffd_nodes rbffd_nodes;
typedef struct rbffd_config rbffd_config;
typedef struct rbffd_result rbffd_result;

RBFFD_API const char* rbffd_version(void);
RBFFD_API const char* rbffd_status_name(rbffd_status status);
/* Message for the last failure on this thread; empty after success. */
RBFFD_API const char* rbffd_last_error(void);

/* ---- node generation ---- */

RBFFD_API rbffd_status rbffd_nodes_generate(double center_x, double center_y, double radius, double h,
                                            uint64_t seed, int k_candidates, rbffd_nodes** out);
RBFFD_API void rbffd_nodes_free(rbffd_nodes* nodes);
RBFFD_API size_t rbffd_nodes_count(const rbffd_nodes* nodes);
RBFFD_API size_t rbffd_nodes_interior_count(const rbffd_nodes* nodes);
RBFFD_API rbffd_status rbffd_nodes_point(const rbffd_nodes* nodes, size_t index, double* x, double* y,
                                         int* boundary);
RBFFD_API rbffd_status rbffd_nodes_write_csv(const rbffd_nodes* nodes, const char* path);

/* ---- stencil weights ----
 * Laplacian weights of a cubic-PHS stencil with monomials up to `degree`.
 * `weights` must hold `count` doubles. */
RBFFD_API rbffd_status rbffd_laplacian_weights(const double* xs, const double* ys, size_t count,
                                               double center_x, double center_y, int degree,
                                               double* weights);

/* ---- configuration ---- */

RBFFD_API rbffd_status rbffd_config_create(rbffd_config** out);
RBFFD_API void rbffd_config_free(rbffd_config* config);
/* Overlay keys of a JSON object onto the configuration. */
RBFFD_API rbffd_status rbffd_config_merge_json(rbffd_config* config, const char* json);
/* Set one key from its textual value, e.g. ("h", "0.02"), ("solver", "dense"),
 * ("n_list", "17,28"). Keys match the JSON configuration keys. */
RBFFD_API rbffd_status rbffd_config_set(rbffd_config* config, const char* key, const char* value);
/* Resolved configuration as JSON; release with rbffd_string_free. */
RBFFD_API rbffd_status rbffd_config_to_json(const rbffd_config* config, char** out);
RBFFD_API void rbffd_string_free(char* text);

/* ---- experiments ---- */

RBFFD_API rbffd_status rbffd_run(const rbffd_config* config, rbffd_experiment kind, rbffd_result** out);
RBFFD_API void rbffd_result_free(rbffd_result* result);
RBFFD_API size_t rbffd_result_row_count(const rbffd_result* result);
RBFFD_API rbffd_status rbffd_result_row(const rbffd_result* result, size_t index, rbffd_row* out);
/* Stencil sizes at detected minima (maxima) of e_poiss_max(n). For split
 * results the minima are those of the curve with one region pinned. Writes
 * at most `capacity` values and returns the total count. */
RBFFD_API size_t rbffd_result_minima(const rbffd_result* result, int* ns, size_t capacity);
RBFFD_API size_t rbffd_result_maxima(const rbffd_result* result, int* ns, size_t capacity);
/* Log-log convergence slope for stencil size n (converge results only). */
RBFFD_API rbffd_status rbffd_result_slope(const rbffd_result* result, int n, double* slope);
/* Human-readable multi-line summary, owned by the result. */
RBFFD_API const char* rbffd_result_summary(const rbffd_result* result);

#ifdef __cplusplus
}
#endif

#endif /* RBFFD_RBFFD_H */
