#ifndef PLURILAB_H
#define PLURILAB_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_JSON = 2,
  PL_STATUS_INVALID_ARGUMENT = 3,
  PL_STATUS_COMPUTATION = 4,
  PL_STATUS_PANIC = 5,
} PlStatus;

/**
 * A genus-zero family.
 */
typedef struct PlFamily PlFamily;

/**
 * A region specification.
 */
typedef struct PlRegion PlRegion;

/**
 * A finite sample of a truncated region.
 */
typedef struct PlSample PlSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pl_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full length including the NUL.
 *
 * # Safety
 * `buf` must be NULL or point to `len` writable bytes.
 */
size_t pl_last_error_message(char *buf, size_t len);

/**
 * Parses a region specification from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_region` must be writable.
 */
enum PlStatus pl_region_from_json(const char *json, struct PlRegion **out_region);

/**
 * # Safety
 * `region` must be NULL or a handle from [`pl_region_from_json`] not yet freed.
 */
void pl_region_free(struct PlRegion *region);

/**
 * Dimension of the region's ambient space.
 *
 * # Safety
 * Valid handle and writable out pointer.
 */
enum PlStatus pl_region_dimension(const struct PlRegion *region, size_t *out_dim);

/**
 * Membership test for a point given as `2·dim` doubles.
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles, writable out pointer.
 */
enum PlStatus pl_region_contains(const struct PlRegion *region,
                                 const double *coords,
                                 size_t dim,
                                 bool *out_contains);

/**
 * Samples `E ∩ {|z| <= radius}` with `total` points (4:1 boundary:interior).
 *
 * # Safety
 * Valid handle and writable out pointer.
 */
enum PlStatus pl_region_sample(const struct PlRegion *region,
                               double radius,
                               size_t total,
                               struct PlSample **out_sample);

/**
 * # Safety
 * `sample` must be NULL or a live handle.
 */
void pl_sample_free(struct PlSample *sample);

/**
 * Number of sample points.
 *
 * # Safety
 * Valid handle and writable out pointer.
 */
enum PlStatus pl_sample_len(const struct PlSample *sample, size_t *out_len);

/**
 * Degree-`degree` extremal value `(1/n) log max |P(z)|` over the sample,
 * with `phases` polygon sides (a positive multiple of 4). With `trend`,
 * the extrapolated value over degrees `n/4, n/2, n` (n a multiple of 4).
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles, writable out pointer.
 */
enum PlStatus pl_green_value(const struct PlSample *sample,
                             const double *coords,
                             size_t dim,
                             size_t degree,
                             size_t phases,
                             bool trend,
                             double *out_value);

/**
 * Robin constant and capacity of a bounded region with default options.
 *
 * # Safety
 * Valid handle; out pointers writable.
 */
enum PlStatus pl_robin(const struct PlRegion *region, double *out_gamma, double *out_capacity);

/**
 * Parses a genus-zero family from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_family` must be writable.
 */
enum PlStatus pl_family_from_json(const char *json, struct PlFamily **out_family);

/**
 * # Safety
 * `family` must be NULL or a live handle.
 */
void pl_family_free(struct PlFamily *family);

/**
 * Zeros of `w ↦ P_n(wλ)` in `|w| <= t`, with multiplicity, plus the
 * vanishing order at the origin.
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles for `lambda`, writable out pointer.
 */
enum PlStatus pl_family_counting(const struct PlFamily *family,
                                 size_t n,
                                 double t,
                                 const double *lambda,
                                 size_t dim,
                                 uint64_t *out_count);

/**
 * `Σ_{|w_j| >= R} 1/w_j` over slice zeros; `out_bound` receives the
 * declared-tail error bound (0 for finite lists).
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles, writable out pointers.
 */
enum PlStatus pl_family_tail_sum(const struct PlFamily *family,
                                 size_t n,
                                 const double *lambda,
                                 size_t dim,
                                 double radius,
                                 double *out_re,
                                 double *out_im,
                                 double *out_bound);

/**
 * `P_n(z)` as `log|P_n(z)|` (−∞ at a zero) and `arg P_n(z)`.
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles, writable out pointers.
 */
enum PlStatus pl_family_evaluate(const struct PlFamily *family,
                                 size_t n,
                                 const double *coords,
                                 size_t dim,
                                 double *out_log_abs,
                                 double *out_arg);

/**
 * `(1/2π k_n) ∫ log|P_n(e^{iθ}λ)| dθ` with `points` trapezoid nodes.
 *
 * # Safety
 * Valid handle, `2·dim` readable doubles, writable out pointer.
 */
enum PlStatus pl_family_circle_average(const struct PlFamily *family,
                                       size_t n,
                                       const double *lambda,
                                       size_t dim,
                                       size_t points,
                                       double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLURILAB_H */
