#ifndef NLOCAL_H
#define NLOCAL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NlStatus {
  NL_STATUS_OK = 0,
  NL_STATUS_NULL_POINTER = 1,
  NL_STATUS_INVALID_UTF8 = 2,
  NL_STATUS_PARSE = 3,
  NL_STATUS_INVALID_ARGUMENT = 4,
  NL_STATUS_NOT_PHYSICAL = 5,
  NL_STATUS_WRONG_TOPOLOGY = 6,
  NL_STATUS_PANIC = 7,
} NlStatus;

typedef enum NlTopology {
  NL_TOPOLOGY_LINEAR = 0,
  NL_TOPOLOGY_STAR = 1,
} NlTopology;

typedef enum NlVmaxMode {
  NL_VMAX_MODE_PRINTED = 0,
  NL_VMAX_MODE_EXACT = 1,
} NlVmaxMode;

/**
 * Opaque network.
 */
typedef struct NlNetwork NlNetwork;

/**
 * Opaque two-qubit state.
 */
typedef struct NlState NlState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *nl_last_error(void);

/**
 * Library version as a static string.
 */
const char *nl_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void nl_string_free(char *s);

/**
 * Builds a state from a JSON source descriptor, e.g.
 * `{"family":"werner","v":0.8}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum NlStatus nl_state_from_json(const char *json, struct NlState **out);

/**
 * Builds a state from row-major real and imaginary parts (16 doubles each;
 * `im` may be NULL for a real matrix).
 *
 * # Safety
 * `re` must point to 16 doubles, `im` to 16 doubles or NULL.
 */
enum NlStatus nl_state_from_matrix(const double *re, const double *im, struct NlState **out);

/**
 * # Safety
 * `state` must come from this library and not be freed twice.
 */
void nl_state_free(struct NlState *state);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_state_concurrence(const struct NlState *state, double *out);

/**
 * Writes the correlation-tensor singular values `e1 ≥ e2 ≥ e3`.
 *
 * # Safety
 * `state` must be a live handle; `out` must point to 3 writable doubles.
 */
enum NlStatus nl_state_singular_values(const struct NlState *state, double *out);

/**
 * Builds a network from a JSON descriptor
 * `{"topology":"linear"|"star","sources":[...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum NlStatus nl_network_from_json(const char *json, struct NlNetwork **out);

/**
 * Builds a network from `n` state handles, which are copied.
 *
 * # Safety
 * `states` must point to `n` live handles; `out` must be writable.
 */
enum NlStatus nl_network_new(enum NlTopology topology,
                             const struct NlState *const *states,
                             size_t n,
                             struct NlNetwork **out);

/**
 * # Safety
 * `network` must come from this library and not be freed twice.
 */
void nl_network_free(struct NlNetwork *network);

/**
 * Closed-form maximal violation `B` for the network's topology.
 *
 * # Safety
 * `network` must be a live handle; `out` must be writable.
 */
enum NlStatus nl_network_b_value(const struct NlNetwork *network, double *out);

/**
 * Full bound report as JSON.
 *
 * # Safety
 * `network` must be a live handle; `out_json` must be writable. Free the
 * result with `nl_string_free`.
 */
enum NlStatus nl_network_analyze(const struct NlNetwork *network,
                                 enum NlVmaxMode vmax_mode,
                                 char **out_json);

/**
 * Numerical maximum of the inequality over settings (`starts` multi-start
 * runs, deterministic in `seed`).
 *
 * # Safety
 * `network` must be a live handle; `out_value` must be writable.
 */
enum NlStatus nl_network_optimize(const struct NlNetwork *network,
                                  uint64_t seed,
                                  uint32_t starts,
                                  double *out_value);

/**
 * Runs a seeded campaign. `claim` is a claim id such as `"conj1"`;
 * `ensemble` a random ensemble name such as `"mixed-ginibre"`. Writes the
 * JSON report and the number of violations.
 *
 * # Safety
 * String arguments must be NUL-terminated; out-pointers must be writable.
 */
enum NlStatus nl_run_campaign(const char *claim,
                              size_t n,
                              size_t trials,
                              const char *ensemble,
                              uint64_t seed,
                              char **out_json,
                              size_t *out_violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NLOCAL_H */
