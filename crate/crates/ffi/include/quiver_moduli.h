#ifndef QUIVER_MODULI_H
#define QUIVER_MODULI_H

#include <stddef.h>
#include <stdint.h>

/**
 * King stability verdict.
 */
typedef enum QmStability {
  QM_STABILITY_STABLE = 0,
  QM_STABILITY_STRICTLY_SEMISTABLE = 1,
  QM_STABILITY_UNSTABLE = 2,
  QM_STABILITY_UNDECIDED = 3,
} QmStability;

/**
 * Status codes. Values are stable.
 */
typedef enum QmStatus {
  QM_STATUS_OK = 0,
  QM_STATUS_NULL_POINTER = 1,
  QM_STATUS_INVALID_UTF8 = 2,
  QM_STATUS_PARSE = 3,
  QM_STATUS_SEMANTIC = 4,
  QM_STATUS_DIMENSION_MISMATCH = 5,
  QM_STATUS_INVALID_INPUT = 6,
  QM_STATUS_RESOLUTION_TRUNCATED = 7,
  QM_STATUS_DEGREE_CAP_EXCEEDED = 8,
  QM_STATUS_CANNOT_SAMPLE = 9,
  QM_STATUS_NOT_APPLICABLE = 10,
  QM_STATUS_INSTANCE_CHECK_FAILED = 11,
  QM_STATUS_BUFFER_TOO_SMALL = 12,
  QM_STATUS_INTERNAL = 13,
  QM_STATUS_IO = 14,
  QM_STATUS_PANIC = 15,
} QmStatus;

/**
 * Opaque bound quiver algebra.
 */
typedef struct QmAlgebra QmAlgebra;

/**
 * Opaque representation of a bound quiver algebra.
 */
typedef struct QmRepresentation QmRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *qm_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qm_version(void);

/**
 * Parses an algebra from its text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QmStatus qm_algebra_parse(const char *text, struct QmAlgebra **out);

/**
 * # Safety
 * `alg` must come from `qm_algebra_parse` and not be freed twice. Null is ignored.
 */
void qm_algebra_free(struct QmAlgebra *alg);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
size_t qm_algebra_vertex_count(const struct QmAlgebra *alg);

/**
 * Tits form `q(d)`.
 *
 * # Safety
 * `d` must point to `len` values; `out` must be valid.
 */
enum QmStatus qm_tits_form(const struct QmAlgebra *alg, const size_t *d, size_t len, int64_t *out);

/**
 * Euler form `<d, e>` from minimal resolutions of simples of length at most `l_max`.
 *
 * # Safety
 * `d` and `e` must point to `len` values; `out` must be valid.
 */
enum QmStatus qm_euler_form(const struct QmAlgebra *alg,
                            const size_t *d,
                            const size_t *e,
                            size_t len,
                            size_t l_max,
                            int64_t *out);

/**
 * Parses a representation file body against `alg`. The `algebra` line of the file is ignored.
 *
 * # Safety
 * `alg` must be live, `text` NUL-terminated and `out` valid.
 */
enum QmStatus qm_representation_parse(const struct QmAlgebra *alg,
                                      const char *text,
                                      struct QmRepresentation **out);

/**
 * # Safety
 * `rep` must come from `qm_representation_parse` and not be freed twice. Null is ignored.
 */
void qm_representation_free(struct QmRepresentation *rep);

/**
 * Writes the dimension vector into `out` (capacity `cap`); `written` receives the length.
 *
 * # Safety
 * `out` must have room for `cap` values; `written` must be valid.
 */
enum QmStatus qm_representation_dims(const struct QmRepresentation *rep,
                                     size_t *out,
                                     size_t cap,
                                     size_t *written);

/**
 * King test of a module for the weight `theta`.
 *
 * # Safety
 * `theta` must point to `len` values; `out` must be valid.
 */
enum QmStatus qm_king_test(const struct QmRepresentation *rep,
                           const int64_t *theta,
                           size_t len,
                           size_t max_basis,
                           uint32_t max_degree,
                           enum QmStability *out);

/**
 * `dim SI(A, d)_{mθ}` for `m = 0..=m_max`, written to `out` (capacity at least `m_max + 1`).
 *
 * # Safety
 * `d` and `theta` must point to `len` values; `out` must have room for `cap` values.
 */
enum QmStatus qm_hilbert_series(const struct QmAlgebra *alg,
                                const size_t *d,
                                const int64_t *theta,
                                size_t len,
                                uint32_t m_max,
                                uint32_t degree_cap,
                                uint64_t *out,
                                size_t cap);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QUIVER_MODULI_H */
