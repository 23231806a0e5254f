#ifndef BORDERED_MODULI_H
#define BORDERED_MODULI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible function.
typedef enum BmStatus {
  BM_STATUS_OK = 0,
  BM_STATUS_NULL_POINTER = 1,
  BM_STATUS_DOMAIN = 2,
  BM_STATUS_VALIDATION = 3,
  BM_STATUS_INTERNAL_CONSISTENCY = 4,
  BM_STATUS_UNSUPPORTED = 5,
  BM_STATUS_OVERFLOW = 6,
  BM_STATUS_PANIC = 7,
} BmStatus;

// Opaque handle to an enumerated degeneration poset.
typedef struct BmStrataPoset BmStrataPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *bm_version(void);

// Message of the last failure on this thread, or null. Free with
// [`bm_string_free`].
char *bm_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void bm_string_free(char *s);

// Number of topological types of symmetric surfaces of genus `g_tilde`.
uintptr_t bm_classify_count(uint32_t g_tilde);

// Enumerates the strata of the moduli space of type `(g, h)` with `n`
// interior and `m[i]` boundary marked points; `h == 0` selects closed curves.
//
// # Safety
// `m` must point to `m_len` values (or be null when `m_len == 0`); `out`
// must be valid for writes.
enum BmStatus bm_strata_enumerate(uint32_t g,
                                  uint32_t h,
                                  uint32_t n,
                                  const uint32_t *m,
                                  uintptr_t m_len,
                                  struct BmStrataPoset **out);

// # Safety
// `p` must be null or a handle from [`bm_strata_enumerate`], not yet freed.
void bm_strata_free(struct BmStrataPoset *p);

// # Safety
// `p` must be a live handle.
uintptr_t bm_strata_len(const struct BmStrataPoset *p);

// Number of strata of real dimension `dim`.
//
// # Safety
// `p` must be a live handle.
uintptr_t bm_strata_count_in_dim(const struct BmStrataPoset *p, int64_t dim);

// Real dimension of stratum `i`.
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum BmStatus bm_strata_dim(const struct BmStrataPoset *p, uintptr_t i, int64_t *out);

// Canonical JSON encoding of stratum `i`.
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum BmStatus bm_strata_stratum_json(const struct BmStrataPoset *p, uintptr_t i, char **out);

// Graphviz rendering of the degeneration poset.
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum BmStatus bm_strata_dot(const struct BmStrataPoset *p, char **out);

// Whether the poset is isomorphic to the face lattice of the associahedron
// of the same dimension.
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum BmStatus bm_strata_is_associahedron(const struct BmStrataPoset *p, bool *out);

// Real dimension of the moduli space of domains.
//
// # Safety
// `m` must point to `m_len` values; `out` must be valid for writes.
enum BmStatus bm_moduli_dim(uint32_t g,
                            uint32_t h,
                            uint32_t n,
                            const uint32_t *m,
                            uintptr_t m_len,
                            int64_t *out);

// Fredholm index `μ + N(2 - 2g - h)`.
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_fredholm_index(int64_t mu, uint32_t big_n, uint32_t g, uint32_t h, int64_t *out);

// Virtual dimension of the moduli space of stable maps.
//
// # Safety
// `m` must point to `m_len` values; `out` must be valid for writes.
enum BmStatus bm_virtual_dim(int64_t mu,
                             uint32_t big_n,
                             uint32_t g,
                             uint32_t h,
                             uint32_t n,
                             const uint32_t *m,
                             uintptr_t m_len,
                             int64_t *out);

// Multiple-cover invariant `C(g;h|d;n|a)` as a `"num/den"` string.
//
// # Safety
// `n` must point to `n_len` values; `out` must be valid for writes.
enum BmStatus bm_invariant(uint32_t g,
                           uint32_t h,
                           uint32_t d,
                           const uint32_t *n,
                           uintptr_t n_len,
                           int64_t a,
                           char **out);

// Dirichlet energy of the logarithmic cutoff `β_r` on an `n × n` grid.
//
// # Safety
// `out` must be valid for writes.
enum BmStatus bm_beta_energy(double r, uintptr_t n, double *out);

// Runs the default gluing verification and returns its JSON report.
//
// # Safety
// `passed` and `out` must be valid for writes.
enum BmStatus bm_verify_gluing_json(bool *passed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BORDERED_MODULI_H */
