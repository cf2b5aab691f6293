#ifndef MIXVOL_H
#define MIXVOL_H

#include <stddef.h>
#include <stdint.h>

typedef enum MixvolStatus {
  MIXVOL_STATUS_OK = 0,
  MIXVOL_STATUS_NULL_POINTER = 1,
  MIXVOL_STATUS_INVALID_UTF8 = 2,
  MIXVOL_STATUS_PARSE = 3,
  MIXVOL_STATUS_DIMENSION_MISMATCH = 4,
  MIXVOL_STATUS_DEGENERATE = 5,
  MIXVOL_STATUS_INVALID_ARGUMENT = 6,
  /**
   * The quantity is undefined for the input (e.g. a zero denominator).
   */
  MIXVOL_STATUS_UNDEFINED = 7,
  MIXVOL_STATUS_PANIC = 8,
} MixvolStatus;

/**
 * Opaque polytope handle.
 */
typedef struct MixvolPolytope MixvolPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `{"dim": n, "vertices": [[...], ...]}`; coordinates may be
 * integers, decimal numbers or `"p/q"` strings.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MixvolStatus mixvol_polytope_from_json(const char *json, struct MixvolPolytope **out);

/**
 * Convex hull of `count` points stored row-major in `coords`
 * (`count * dim` doubles, converted exactly).
 *
 * # Safety
 * `coords` must point to `count * dim` doubles and `out` must be valid.
 */
enum MixvolStatus mixvol_polytope_from_vertices(size_t dim,
                                                const double *coords,
                                                size_t count,
                                                struct MixvolPolytope **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, freed at most once.
 */
void mixvol_polytope_free(struct MixvolPolytope *p);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a valid handle.
 */
size_t mixvol_polytope_dim(const struct MixvolPolytope *p);

/**
 * # Safety
 * `p` must be null or a valid handle.
 */
size_t mixvol_polytope_num_vertices(const struct MixvolPolytope *p);

/**
 * # Safety
 * `p` must be null or a valid handle.
 */
size_t mixvol_polytope_num_facets(const struct MixvolPolytope *p);

/**
 * # Safety
 * `p` must be a valid handle and `out` a valid pointer.
 */
enum MixvolStatus mixvol_volume(const struct MixvolPolytope *p, double *out);

/**
 * # Safety
 * `p` must be a valid handle and `out` a valid pointer.
 */
enum MixvolStatus mixvol_surface_area(const struct MixvolPolytope *p, double *out);

/**
 * `(1/n)|∂K|/|K|`.
 *
 * # Safety
 * `p` must be a valid handle and `out` a valid pointer.
 */
enum MixvolStatus mixvol_isop(const struct MixvolPolytope *p, double *out);

/**
 * Largest `Isop(F)/Isop(K)` over facets `F`.
 *
 * # Safety
 * `p` must be a valid handle and `out` a valid pointer.
 */
enum MixvolStatus mixvol_max_facet_ratio(const struct MixvolPolytope *p, double *out);

/**
 * `V(K_1, ..., K_n)` of `n` bodies in `R^n`.
 *
 * # Safety
 * `ps` must point to `n` valid handles and `out` must be valid.
 */
enum MixvolStatus mixvol_mixed_volume(const struct MixvolPolytope *const *ps,
                                      size_t n,
                                      double *out);

/**
 * Exact mixed volume as a newly allocated `"p/q"` string; release it with
 * `mixvol_string_free`.
 *
 * # Safety
 * `ps` must point to `n` valid handles and `out` must be valid.
 */
enum MixvolStatus mixvol_mixed_volume_exact(const struct MixvolPolytope *const *ps,
                                            size_t n,
                                            char **out);

/**
 * `V(A,B,K[n-2])V(K) / (V(A,K[n-1])V(B,K[n-1]))`; `Undefined` when the
 * denominator vanishes.
 *
 * # Safety
 * All handles must be valid and `out` must be valid.
 */
enum MixvolStatus mixvol_bezout_ratio(const struct MixvolPolytope *k,
                                      const struct MixvolPolytope *a,
                                      const struct MixvolPolytope *b,
                                      double *out);

/**
 * Message of the last failed call on this thread as a newly allocated
 * string (release with `mixvol_string_free`), or null.
 */
char *mixvol_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void mixvol_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXVOL_H */
