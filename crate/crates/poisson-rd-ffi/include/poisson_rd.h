/* C ABI for the poisson-rd library.
 *
 * Conventions:
 *   - every function returns a PrdStatus; outputs go through out
 *     pointers, written only on PRD_OK;
 *   - handles are opaque and freed with their _free function;
 *   - strings returned through char** are UTF-8, owned by the caller and
 *     freed with prd_string_free; f64 buffers with prd_f64_free;
 *   - after a non-OK status, prd_last_error_message() returns a
 *     thread-local description valid until the next failing call.
 */

#ifndef POISSON_RD_H
#define POISSON_RD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PRD_POLYTOPE_CUBE 0

#define PRD_POLYTOPE_OCTAHEDRON 1

#define PRD_POLYTOPE_SIMPLEX 2

#define PRD_POLYTOPE_ORDER_SIMPLEX 3

#define PRD_GROUP_PERMUTATION 0

#define PRD_GROUP_REFLECTION 1

#define PRD_GROUP_HYPEROCTAHEDRAL 2

#define PRD_GROUP_TRIVIAL 3

#define PRD_SHAPE_CUBE 0

#define PRD_SHAPE_ORDER_SIMPLEX 1

#define PRD_SOURCE_LAPLACIAN 0

#define PRD_SOURCE_EXPONENTIAL 1

/**
 * Status codes. Stable values; additions only.
 */
typedef enum PrdStatus {
  PRD_STATUS_OK = 0,
  PRD_STATUS_NULL_POINTER = 1,
  PRD_STATUS_INVALID_ARGUMENT = 2,
  PRD_STATUS_COMPUTATION_FAILED = 3,
} PrdStatus;

/**
 * Opaque finite-group handle.
 */
typedef struct PrdGroup PrdGroup;

/**
 * Opaque polytope handle.
 */
typedef struct PrdPolytope PrdPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL.
 */
const char *prd_last_error_message(void);

/**
 * Crate version as a static string.
 */
const char *prd_version(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string obtained from this library, freed once.
 */
void prd_string_free(char *s);

/**
 * Frees an f64 buffer returned by this library.
 *
 * # Safety
 * `ptr`/`len` must come from a poisson-rd function returning a buffer.
 */
void prd_f64_free(double *ptr, size_t len);

/**
 * Builds a canonical polytope (family constants above).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PrdStatus prd_polytope_new_family(int family, size_t n, struct PrdPolytope **out);

/**
 * # Safety
 * `p` must be NULL or a live handle from this library, freed once.
 */
void prd_polytope_free(struct PrdPolytope *p);

/**
 * # Safety
 * `p` must be a live handle; `out` a valid pointer.
 */
enum PrdStatus prd_polytope_dim(const struct PrdPolytope *p, size_t *out);

/**
 * # Safety
 * `p` must be a live handle; `out` a valid pointer.
 */
enum PrdStatus prd_polytope_vertex_count(const struct PrdPolytope *p, size_t *out);

/**
 * Serializes the polytope as `{"dim": n, "vertices": [["p/q", ...]]}`.
 *
 * # Safety
 * `p` must be a live handle; `out` a valid pointer.
 */
enum PrdStatus prd_polytope_to_json(const struct PrdPolytope *p, char **out);

/**
 * Builds a canonical signed-permutation group.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PrdStatus prd_group_new_family(int family, size_t n, struct PrdGroup **out);

/**
 * # Safety
 * `g` must be NULL or a live handle from this library, freed once.
 */
void prd_group_free(struct PrdGroup *g);

/**
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
enum PrdStatus prd_group_order(const struct PrdGroup *g, size_t *out);

/**
 * Writes 1 when `h` is a normal subgroup of `g`, else 0.
 *
 * # Safety
 * Both handles must be live; `out` a valid pointer.
 */
enum PrdStatus prd_group_is_normal_in(const struct PrdGroup *h,
                                      const struct PrdGroup *g,
                                      uint8_t *out);

/**
 * Writes 1 when the groups are isomorphic (exact search up to the cap).
 *
 * # Safety
 * Both handles must be live; `out` a valid pointer.
 */
enum PrdStatus prd_group_isomorphic(const struct PrdGroup *a,
                                    const struct PrdGroup *b,
                                    uint8_t *out);

/**
 * Vertex symmetry group of a polytope, as a new group handle acting on
 * vertex indices.
 *
 * # Safety
 * `p` must be a live handle; `out` a valid pointer.
 */
enum PrdStatus prd_vertex_symmetry_group(const struct PrdPolytope *p, struct PrdGroup **out);

/**
 * Exact covering bound: rate log2(1/D) and the count (1/D)^n as a
 * decimal string.
 *
 * # Safety
 * `out_rate` and `out_count` must be valid pointers.
 */
enum PrdStatus prd_cover_bound(int shape,
                               size_t n,
                               int64_t d_num,
                               int64_t d_den,
                               double *out_rate,
                               char **out_count);

/**
 * Canonical queueing distortion between two timing vectors on [0, T].
 * Writes the value and a finiteness flag (value is meaningful only when
 * finite = 1).
 *
 * # Safety
 * `t`/`xhat` must point to `t_len`/`xhat_len` doubles; out pointers
 * valid.
 */
enum PrdStatus prd_queueing_distortion(const double *t,
                                       size_t t_len,
                                       const double *xhat,
                                       size_t xhat_len,
                                       double duration,
                                       double *out_value,
                                       uint8_t *out_finite);

/**
 * Samples a homogeneous Poisson realization; the caller frees the buffer
 * with `prd_f64_free`.
 *
 * # Safety
 * `out_buf` and `out_len` must be valid pointers.
 */
enum PrdStatus prd_sample_homogeneous(double lambda,
                                      double duration,
                                      uint64_t seed,
                                      double **out_buf,
                                      size_t *out_len);

/**
 * Blahut-Arimoto rate at a target distortion on the default grids.
 *
 * # Safety
 * `out_rate` and `out_distortion` must be valid pointers.
 */
enum PrdStatus prd_ba_solve(int source,
                            double lambda,
                            double target_d,
                            double *out_rate,
                            double *out_distortion);

/**
 * Symmetry-equals-automorphism comparison for cube (0), octahedron (1)
 * or simplex (2) families.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum PrdStatus prd_verify_sym_equals_aut(int family,
                                         size_t n,
                                         size_t *out_sym_order,
                                         size_t *out_aut_order,
                                         uint8_t *out_equal);

/**
 * Shortest-path = Hamming = squared-l2 check over hypercube vertices.
 *
 * # Safety
 * `out_pass` must be a valid pointer.
 */
enum PrdStatus prd_hamming_l2_check(size_t n, uint8_t *out_pass);

/**
 * Runs the canonical symmetrization and returns the trace as JSON.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum PrdStatus prd_symmetrize_run(size_t n,
                                  size_t max_steps,
                                  uint8_t order_heuristic,
                                  char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POISSON_RD_H */
