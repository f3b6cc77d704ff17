#ifndef DIAMOND_TRANSPORT_H
#define DIAMOND_TRANSPORT_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Selects configuration A (all couplings positive).
 */
#define DT_CONFIG_A 0

/**
 * Selects configuration B (one negative coupling).
 */
#define DT_CONFIG_B 1

typedef enum DtStatus {
  DT_STATUS_OK = 0,
  DT_STATUS_NULL_POINTER = 1,
  DT_STATUS_INVALID_ARGUMENT = 2,
  DT_STATUS_INVARIANT_BREACH = 3,
  DT_STATUS_OUT_OF_RANGE = 4,
  DT_STATUS_PANIC = 5,
} DtStatus;

/**
 * Efficiency grid and refined optimum of a dephasing sweep.
 */
typedef struct DtSweep DtSweep;

/**
 * Sampled density-matrix evolution.
 */
typedef struct DtTrajectory DtTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *dt_version(void);

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *dt_last_error(void);

/**
 * Coupling strength of a `+` edge with base coupling `base` whose sites
 * oscillate with amplitude `amplitude`, angular frequency `omega0` and
 * phase `phase`, evaluated at time `t`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum DtStatus dt_coupling_at(double base,
                             double amplitude,
                             double omega0,
                             double phase,
                             double t,
                             double *out);

/**
 * Evolves a preset scenario from an excitation on site 1.
 *
 * # Safety
 * `scenario` must be null or a NUL-terminated string; `out` must be null or
 * point to writable storage for one handle.
 */
enum DtStatus dt_simulate(const char *scenario,
                          uint32_t configuration,
                          double gamma,
                          double sink_rate,
                          double t_max,
                          double step,
                          struct DtTrajectory **out);

/**
 * Number of samples, including `t = 0`. Zero for a null handle.
 *
 * # Safety
 * `traj` must be null or a live handle from [`dt_simulate`].
 */
size_t dt_trajectory_len(const struct DtTrajectory *traj);

/**
 * Time and population of `site` (1 to 4, or 5 for the sink) at sample
 * `index`.
 *
 * # Safety
 * `traj` must be null or a live handle; `time` and `population` must be
 * null or writable.
 */
enum DtStatus dt_trajectory_sample(const struct DtTrajectory *traj,
                                   size_t index,
                                   uint32_t site,
                                   double *time,
                                   double *population);

/**
 * Copies the population series of `site` into `buffer`, which must hold
 * exactly [`dt_trajectory_len`] values.
 *
 * # Safety
 * `buffer` must be null or writable for `capacity` doubles.
 */
enum DtStatus dt_trajectory_copy_series(const struct DtTrajectory *traj,
                                        uint32_t site,
                                        double *buffer,
                                        size_t capacity);

/**
 * Releases a trajectory. Null is ignored.
 *
 * # Safety
 * `traj` must be null or a handle not yet freed.
 */
void dt_trajectory_free(struct DtTrajectory *traj);

/**
 * Scans dephasing rates on an evenly spaced grid for configuration B with
 * the sink rate tied to twice the dephasing rate, then refines the best
 * point to `resolution`.
 *
 * # Safety
 * `scenario` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum DtStatus dt_sweep(const char *scenario,
                       double gamma_min,
                       double gamma_max,
                       size_t n_points,
                       double t_eval,
                       double step,
                       double resolution,
                       struct DtSweep **out);

/**
 * Number of grid points. Zero for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live handle from [`dt_sweep`].
 */
size_t dt_sweep_len(const struct DtSweep *sweep);

/**
 * Dephasing rate and efficiency at grid point `index`.
 *
 * # Safety
 * `sweep` must be null or a live handle; outputs must be null or writable.
 */
enum DtStatus dt_sweep_point(const struct DtSweep *sweep,
                             size_t index,
                             double *gamma,
                             double *efficiency);

/**
 * Refined optimal dephasing rate and its efficiency.
 *
 * # Safety
 * `sweep` must be null or a live handle; outputs must be null or writable.
 */
enum DtStatus dt_sweep_optimum(const struct DtSweep *sweep, double *gamma, double *efficiency);

/**
 * Releases a sweep. Null is ignored.
 *
 * # Safety
 * `sweep` must be null or a handle not yet freed.
 */
void dt_sweep_free(struct DtSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAMOND_TRANSPORT_H */
