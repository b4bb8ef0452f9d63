#ifndef BETACOAL_H
#define BETACOAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BcStatus {
  BC_STATUS_OK = 0,
  /**
   * Argument outside the domain of the function.
   */
  BC_STATUS_DOMAIN = 1,
  BC_STATUS_DIVERGENCE = 2,
  /**
   * Refused by a resource cap; nothing was computed.
   */
  BC_STATUS_RESOURCE = 3,
  BC_STATUS_EMPTY_INPUT = 4,
  BC_STATUS_THREAD_POOL = 5,
  BC_STATUS_NULL_POINTER = 6,
  /**
   * The caller's buffer is shorter than the result.
   */
  BC_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * Internal failure; please report it.
   */
  BC_STATUS_PANIC = 8,
} BcStatus;

/**
 * Fields readable through [`bc_expansion_coeffs_get`].
 */
typedef enum BcCoeff {
  BC_COEFF_M1 = 0,
  BC_COEFF_M2 = 1,
  BC_COEFF_C = 2,
  BC_COEFF_ALPHA = 3,
  BC_COEFF_VARIANCE_COEFFICIENT = 4,
} BcCoeff;

/**
 * Expansion constants m_1, m_2, c, α and r_1..r_K.
 */
typedef struct BcExpansionCoeffs BcExpansionCoeffs;

/**
 * Law of the first jump I_n of the beta(2, b) block-counting chain.
 */
typedef struct BcJumpPmf BcJumpPmf;

/**
 * Exact moments E X_n^k for n ≤ n_max, k ≤ k_max.
 */
typedef struct BcMomentTable BcMomentTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null if there was none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bc_version(void);

/**
 * ln Γ(x) for x > 0.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_log_gamma(double x, double *out);

/**
 * Ψ(x) for x > 0.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_digamma(double x, double *out);

/**
 * Ψ'(x) for x > 0.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_trigamma(double x, double *out);

/**
 * ζ(s, b) for s > 1, b > 0.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_hurwitz_zeta(double s, double b, double *out);

/**
 * r! ζ(r + 1, b).
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_levy_moment(uint32_t r, double b, double *out);

/**
 * H(n, b) = b/(b+n−1) + Ψ(b+n−1) − Ψ(b) − 1.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_h(uint64_t n, double b, double *out);

/**
 * g_nk for Λ = beta(a, b).
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_collision_rate(double a, double b, uint64_t n, uint64_t k, double *out);

/**
 * g_n = Σ_k g_nk for Λ = beta(a, b).
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum BcStatus bc_total_rate(double a, double b, uint64_t n, double *out);

/**
 * Standard normal distribution function.
 */
double bc_normal_cdf(double x);

/**
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum BcStatus bc_jump_pmf_new(uint64_t n, double b, struct BcJumpPmf **out);

/**
 * Number of atoms, n − 1; 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle from [`bc_jump_pmf_new`].
 */
size_t bc_jump_pmf_len(const struct BcJumpPmf *h);

/**
 * P{I_n = k}, zero outside 1..n−1.
 *
 * # Safety
 * `h` must be null or a live handle; `out` null or writable.
 */
enum BcStatus bc_jump_pmf_prob(const struct BcJumpPmf *h, uint64_t k, double *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void bc_jump_pmf_free(struct BcJumpPmf *h);

/**
 * Builds the table under the default resource caps.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum BcStatus bc_moment_table_new(size_t n_max, size_t k_max, double b, struct BcMomentTable **out);

/**
 * # Safety
 * `h` must be null or a live handle; `out` null or writable.
 */
enum BcStatus bc_moment_table_get(const struct BcMomentTable *h, size_t n, size_t k, double *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void bc_moment_table_free(struct BcMomentTable *h);

/**
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum BcStatus bc_expansion_coeffs_new(uint32_t k_max, double b, struct BcExpansionCoeffs **out);

/**
 * # Safety
 * `h` must be null or a live handle; `out` null or writable.
 */
enum BcStatus bc_expansion_coeffs_get(const struct BcExpansionCoeffs *h,
                                      enum BcCoeff which,
                                      double *out);

/**
 * r_k for 1 ≤ k ≤ k_max.
 *
 * # Safety
 * `h` must be null or a live handle; `out` null or writable.
 */
enum BcStatus bc_expansion_coeffs_r(const struct BcExpansionCoeffs *h, uint32_t k, double *out);

/**
 * α^k log^{2k} n + r_k log^{2k−1} n.
 *
 * # Safety
 * `h` must be null or a live handle; `out` null or writable.
 */
enum BcStatus bc_moment_expansion(const struct BcExpansionCoeffs *h,
                                  uint64_t n,
                                  uint32_t k,
                                  double *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void bc_expansion_coeffs_free(struct BcExpansionCoeffs *h);

/**
 * Writes P{X_n = j}, j = 0..n−1, into `buf` (at least n doubles).
 *
 * # Safety
 * `buf` must be null or valid for writing `len` doubles.
 */
enum BcStatus bc_exact_distribution(size_t n, double b, double *buf, size_t len);

/**
 * Draws `reps` samples of X_n into `buf` (at least `reps` values). The
 * samples depend only on `seed` and the parameters, not on `workers`.
 *
 * # Safety
 * `buf` must be null or valid for writing `len` values.
 */
enum BcStatus bc_sample_collisions(uint64_t n,
                                   double b,
                                   uint64_t reps,
                                   uint64_t seed,
                                   size_t workers,
                                   uint64_t *buf,
                                   size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETACOAL_H */
