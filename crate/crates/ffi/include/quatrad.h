#ifndef QUATRAD_H
#define QUATRAD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  QR_STATUS_INVALID_ARGUMENT = 2,
  QR_STATUS_SHAPE = 3,
  QR_STATUS_NOT_NORMAL = 4,
  QR_STATUS_NOT_POSITIVE = 5,
  QR_STATUS_ZERO_OPERATOR = 6,
  QR_STATUS_PARSE = 7,
  QR_STATUS_NUMERIC = 8,
  QR_STATUS_PANIC = 9,
} QrStatus;

typedef enum QrKind {
  QR_KIND_GENERAL = 0,
  QR_KIND_NORMAL = 1,
  QR_KIND_SELF_ADJOINT = 2,
  QR_KIND_POSITIVE = 3,
  QR_KIND_UNITARY = 4,
} QrKind;

/**
 * Opaque quaternionic matrix.
 */
typedef struct QrMatrix QrMatrix;

/**
 * Opaque spectral decomposition of a normal matrix.
 */
typedef struct QrSpectrum QrSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qr_last_error(void);

/**
 * Copies `4·rows·cols` doubles (row-major quadruples) into a new matrix.
 *
 * # Safety
 * `data` must point to `4·rows·cols` readable doubles and `out` must be
 * valid for writes.
 */
enum QrStatus qr_matrix_new(size_t rows, size_t cols, const double *data, struct QrMatrix **out);

/**
 * Random matrix of the requested kind; deterministic in `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QrStatus qr_matrix_random(enum QrKind kind, size_t n, uint64_t seed, struct QrMatrix **out);

/**
 * Parses the matrix JSON schema `{"n", "m", "entries"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum QrStatus qr_matrix_from_json(const char *json, struct QrMatrix **out);

/**
 * Serializes to JSON; release the string with [`qr_string_free`].
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_matrix_to_json(const struct QrMatrix *m, char **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qr_string_free(char *s);

/**
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_matrix_clone(const struct QrMatrix *m, struct QrMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void qr_matrix_free(struct QrMatrix *m);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t qr_matrix_rows(const struct QrMatrix *m);

/**
 * Number of columns, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t qr_matrix_cols(const struct QrMatrix *m);

/**
 * Writes entry `(r, c)` as four doubles.
 *
 * # Safety
 * `m` must be a live handle and `out` must have room for four doubles.
 */
enum QrStatus qr_matrix_get(const struct QrMatrix *m, size_t r, size_t c, double *out);

/**
 * Copies all entries row-major into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle and `buf` valid for `len` writes.
 */
enum QrStatus qr_matrix_copy_data(const struct QrMatrix *m, double *buf, size_t len);

/**
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_operator_norm(const struct QrMatrix *m, double *out);

/**
 * Numerical radius estimate by projected gradient ascent.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_numerical_radius(const struct QrMatrix *m,
                                  size_t restarts,
                                  size_t max_iters,
                                  uint64_t seed,
                                  double *out);

/**
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_is_normal(const struct QrMatrix *m, bool *out);

/**
 * Whether `q` (four doubles) lies in the spherical point spectrum.
 *
 * # Safety
 * `m` must be a live handle, `q` four readable doubles, `out` writable.
 */
enum QrStatus qr_in_point_spectrum(const struct QrMatrix *m, const double *q, bool *out);

/**
 * Spectral decomposition of a normal matrix.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_spectrum(const struct QrMatrix *m, struct QrSpectrum **out);

/**
 * Number of stored eigenpairs (nonzero eigenvalues), or 0 for null.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t qr_spectrum_len(const struct QrSpectrum *s);

/**
 * Standardized eigenvalue `k` as four doubles.
 *
 * # Safety
 * `s` must be a live handle and `out` must have room for four doubles.
 */
enum QrStatus qr_spectrum_eigenvalue(const struct QrSpectrum *s, size_t k, double *out);

/**
 * Eigenvector `k` as `4·n` doubles into `buf` of length `len`.
 *
 * # Safety
 * `s` must be a live handle and `buf` valid for `len` writes.
 */
enum QrStatus qr_spectrum_eigenvector(const struct QrSpectrum *s,
                                      size_t k,
                                      double *buf,
                                      size_t len);

/**
 * Number of distinct eigenvalue classes.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t qr_spectrum_class_count(const struct QrSpectrum *s);

/**
 * Class `k` as `(re, |im|)`.
 *
 * # Safety
 * `s` must be a live handle; `re` and `im_mod` must be writable.
 */
enum QrStatus qr_spectrum_class(const struct QrSpectrum *s, size_t k, double *re, double *im_mod);

/**
 * # Safety
 * `s` must be null or a handle from this library that has not been freed.
 */
void qr_spectrum_free(struct QrSpectrum *s);

/**
 * Polar factors `A = V|A|`; both outputs are new handles.
 *
 * # Safety
 * `m` must be a live handle; `v` and `abs` valid for writes.
 */
enum QrStatus qr_polar(const struct QrMatrix *m, struct QrMatrix **v, struct QrMatrix **abs);

/**
 * Square root of a positive matrix.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_sqrt_positive(const struct QrMatrix *m, struct QrMatrix **out);

/**
 * `|A| = (A*A)^{1/2}`.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum QrStatus qr_modulus(const struct QrMatrix *m, struct QrMatrix **out);

/**
 * Rank-one `K` with `‖K‖ ≤ eps` such that `A + K` attains its norm at the
 * returned witness. `achieved` receives `‖(A + K)x‖` and `norm` receives
 * `‖A + K‖`; `witness` (may be null) receives `4·n` doubles.
 *
 * # Safety
 * `m` must be a live handle; `k`, `achieved` and `norm` writable; `witness`
 * null or valid for `4·n` writes.
 */
enum QrStatus qr_lindenstrauss(const struct QrMatrix *m,
                               double eps,
                               struct QrMatrix **k,
                               double *witness,
                               double *achieved,
                               double *norm);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUATRAD_H */
