#ifndef CECHKIT_H
#define CECHKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every fallible entry point.
 */
typedef enum CechStatus {
  CECH_STATUS_OK = 0,
  CECH_STATUS_NULL_POINTER = 1,
  CECH_STATUS_INVALID_ARGUMENT = 2,
  CECH_STATUS_PRECONDITION = 3,
  CECH_STATUS_NUMERICAL = 4,
  CECH_STATUS_IO = 5,
  CECH_STATUS_BUFFER_TOO_SMALL = 6,
  CECH_STATUS_PANIC = 7,
} CechStatus;

/**
 * A Čech complex built from a sample.
 */
typedef struct CechComplex CechComplex;

/**
 * A point sample together with its observation window.
 */
typedef struct CechSample CechSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cech_version(void);

/**
 * Copies the calling thread's last error message into `buf` (always
 * NUL-terminated when `len > 0`) and returns its full length in bytes,
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `len` writable bytes.
 */
size_t cech_last_error(char *buf, size_t len);

/**
 * Builds a sample from `n` points of dimension `dim` stored row-major in
 * `coords`, observed in the cube of side `side` centred at the origin.
 *
 * # Safety
 * `coords` must be valid for `n * dim` reads (it may be null when `n == 0`)
 * and `out` must be valid for one write.
 */
enum CechStatus cech_sample_from_coords(const double *coords,
                                        size_t n,
                                        size_t dim,
                                        double side,
                                        struct CechSample **out);

/**
 * Samples a homogeneous Poisson process of intensity `lambda` on the cube
 * of side `side` centred at the origin.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum CechStatus cech_sample_poisson(double lambda,
                                    size_t dim,
                                    double side,
                                    uint64_t seed,
                                    struct CechSample **out);

/**
 * Number of points in a sample, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t cech_sample_len(const struct CechSample *s);

/**
 * Ambient dimension of a sample, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t cech_sample_dim(const struct CechSample *s);

/**
 * Copies the coordinates (row-major) into `buf`, which must hold
 * `len * dim` values.
 *
 * # Safety
 * `s` must be a live handle and `buf` valid for `cap` writes.
 */
enum CechStatus cech_sample_coords(const struct CechSample *s, double *buf, size_t cap);

/**
 * Releases a sample. Null is ignored.
 *
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void cech_sample_free(struct CechSample *s);

/**
 * Builds the Čech complex of radius `r` up to dimension `k_cap`.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for one write.
 */
enum CechStatus cech_complex_build(const struct CechSample *s,
                                   double r,
                                   size_t k_cap,
                                   struct CechComplex **out);

/**
 * Highest dimension stored, so counts and Betti numbers have `k_cap + 1`
 * entries. Returns 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t cech_complex_k_cap(const struct CechComplex *c);

/**
 * Writes the number of `j`-simplices for `j = 0..=k_cap` into `buf`.
 *
 * # Safety
 * `c` must be a live handle and `buf` valid for `cap` writes.
 */
enum CechStatus cech_complex_face_counts(const struct CechComplex *c, size_t *buf, size_t cap);

/**
 * Writes the Betti numbers over GF(`p`) for `k = 0..=k_cap` into `buf`.
 * The top entry ignores simplices above `k_cap`.
 *
 * # Safety
 * `c` must be a live handle and `buf` valid for `cap` writes.
 */
enum CechStatus cech_complex_betti(const struct CechComplex *c,
                                   uint32_t p,
                                   size_t *buf,
                                   size_t cap);

/**
 * Releases a complex. Null is ignored.
 *
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void cech_complex_free(struct CechComplex *c);

/**
 * Counts vacant components of the union of radius-`r` balls on a grid with
 * `resolution` cells per unit length over the sample's window.
 *
 * # Safety
 * `s` must be a live handle; the outputs must be valid for one write.
 */
enum CechStatus cech_vacant_components(const struct CechSample *s,
                                       double r,
                                       double resolution,
                                       size_t *bounded,
                                       size_t *touches_boundary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CECHKIT_H */
