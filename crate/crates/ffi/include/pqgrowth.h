/* C interface of the pqgrowth growth-scale toolkit. */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Limit class of a growth estimate.
 */
typedef enum PqClass {
  PqClass_Infinity = 0,
  PqClass_Zero = 1,
  PqClass_Unit = 2,
  PqClass_Finite = 3,
} PqClass;

/**
 * Status code of every fallible call.
 */
typedef enum PqStatus {
  PqStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  PqStatus_NullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PqStatus_InvalidUtf8 = 2,
  /**
   * The expression text does not parse.
   */
  PqStatus_Syntax = 3,
  /**
   * The expression uses a negative coefficient.
   */
  PqStatus_NegativeCoefficient = 4,
  /**
   * A numeric argument is outside its domain.
   */
  PqStatus_InvalidValue = 5,
  /**
   * The operation is undefined for these values.
   */
  PqStatus_Domain = 6,
  /**
   * A value left the representable range.
   */
  PqStatus_Overflow = 7,
  /**
   * The measurement could not be classified.
   */
  PqStatus_Indeterminate = 8,
  /**
   * The series oracle's guard radius was exceeded.
   */
  PqStatus_GuardRadius = 9,
  /**
   * The sandwich's lower argument was not positive.
   */
  PqStatus_NonpositiveArgument = 10,
  /**
   * Profile parameters violate admissibility.
   */
  PqStatus_Admissibility = 11,
  /**
   * No index pair was found in the scanned range.
   */
  PqStatus_NotFound = 12,
  /**
   * A statement's hypotheses do not hold.
   */
  PqStatus_HypothesisViolated = 13,
  /**
   * An internal panic was caught.
   */
  PqStatus_Panic = 14,
} PqStatus;

/**
 * Verdict of an interval comparison.
 */
typedef enum PqVerdict {
  PqVerdict_Pass = 0,
  PqVerdict_Inconclusive = 1,
  PqVerdict_Fail = 2,
} PqVerdict;

/**
 * Opaque handle to a parsed entire-function expression.
 */
typedef struct PqExpr PqExpr;

/**
 * A tower value `exp^[level](mantissa)`. Constructors canonicalize, so
 * any finite mantissa is accepted on input; outputs keep the mantissa in
 * `[1, e)` for level >= 1.
 */
typedef struct PqTower {
  uint32_t level;
  double mantissa;
} PqTower;

/**
 * A (p,q)-order estimate: tail limsup (`rho`), tail liminf (`lambda`),
 * and the fitted residual slope of the quotient sequence.
 */
typedef struct PqEstimate {
  double rho;
  double lambda;
  double slope;
  enum PqClass class_;
  bool converged;
} PqEstimate;

/**
 * A detected index pair with its order estimate.
 */
typedef struct PqIndexPair {
  uint32_t p;
  uint32_t q;
  struct PqEstimate order;
  /**
   * Whether order and lower order coincide.
   */
  bool regular;
} PqIndexPair;

/**
 * One composition-sandwich check: rigorous enclosures of the lower
 * bound, the composition, and the upper bound at radius `r`.
 */
typedef struct PqSandwich {
  double r;
  double lower_lo;
  double lower_hi;
  double mid_lo;
  double mid_hi;
  double upper_lo;
  double upper_hi;
  enum PqVerdict verdict;
  /**
   * True when the lower bound degenerated to [0, 0] because its
   * argument was not positive at this radius.
   */
  bool lower_vacuous;
} PqSandwich;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse an expression (grammar: `z^3`, `exp[2](z^4)`, sums, products,
 * nonnegative constants, and `o` for composition) into a new handle.
 * The handle must be released with [`pq_expr_free`].
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must point to writable
 * memory for one pointer.
 */
enum PqStatus pq_expr_parse(const char *src, struct PqExpr **out);

/**
 * Write the canonical text of an expression into `buf` (NUL-terminated,
 * truncated to `cap` bytes). `needed` receives the full length including
 * the NUL, so a second call with a larger buffer can fetch a truncated
 * result; `buf` may be null when only the length is wanted.
 *
 * # Safety
 * `expr` must be a live handle; `buf`, when non-null, must have `cap`
 * writable bytes; `needed` may be null.
 */
enum PqStatus pq_expr_print(const struct PqExpr *expr, char *buf, uintptr_t cap, uintptr_t *needed);

/**
 * Release a handle from [`pq_expr_parse`]. Null is ignored.
 *
 * # Safety
 * `expr` must be null or a handle that has not already been freed.
 */
void pq_expr_free(struct PqExpr *expr);

/**
 * Maximum modulus `M(r)` as a tower value.
 *
 * # Safety
 * `expr` must be a live handle; `out` must point to writable memory for
 * one `PqTower`.
 */
enum PqStatus pq_max_modulus(const struct PqExpr *expr, struct PqTower r, struct PqTower *out);

/**
 * The radius `r` with `M(r) = value`, to relative tolerance `rel_tol`
 * (pass 0 for the default 1e-9).
 *
 * # Safety
 * `expr` must be a live handle; `out` must point to writable memory for
 * one `PqTower`.
 */
enum PqStatus pq_inverse_max_modulus(const struct PqExpr *expr,
                                     struct PqTower value,
                                     double rel_tol,
                                     struct PqTower *out);

/**
 * Estimate the (p,q)-order of the expression with default estimator
 * settings.
 *
 * # Safety
 * `expr` must be a live handle; `out` must point to writable memory for
 * one `PqEstimate`.
 */
enum PqStatus pq_order(const struct PqExpr *expr, uint32_t p, uint32_t q, struct PqEstimate *out);

/**
 * Scan for the expression's index pair with default estimator settings.
 *
 * # Safety
 * `expr` must be a live handle; `out` must point to writable memory for
 * one `PqIndexPair`.
 */
enum PqStatus pq_index_pair(const struct PqExpr *expr, struct PqIndexPair *out);

/**
 * Estimate the relative (p,q)-order of `f` with respect to `g` with
 * default estimator settings.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must point to writable memory
 * for one `PqEstimate`.
 */
enum PqStatus pq_relative_order(const struct PqExpr *f,
                                const struct PqExpr *g,
                                uint32_t p,
                                uint32_t q,
                                struct PqEstimate *out);

/**
 * Check the composition sandwich `M_f(M_g(r/2)/8 - |g(0)|) <= M_{f o g}(r)
 * <= M_f(M_g(r))` with the series oracle at radius `r`. `n_terms` is the
 * starting truncation order (pass 0 for the default).
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must point to writable memory
 * for one `PqSandwich`.
 */
enum PqStatus pq_check_sandwich(const struct PqExpr *f,
                                const struct PqExpr *g,
                                double r,
                                uintptr_t n_terms,
                                struct PqSandwich *out);

/**
 * Copy the last error message into `buf` (NUL-terminated, truncated to
 * `cap` bytes) and return the full message length excluding the NUL.
 * With a null `buf` only the length is returned.
 *
 * # Safety
 * `buf`, when non-null, must have `cap` writable bytes.
 */
uintptr_t pq_last_error(char *buf, uintptr_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
