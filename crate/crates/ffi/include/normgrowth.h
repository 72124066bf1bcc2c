#ifndef NORMGROWTH_H
#define NORMGROWTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NgStatus {
  NG_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  NG_STATUS_NULL_ARGUMENT = 1,
  NG_STATUS_PARSE = 2,
  /**
   * The matrix violates a condition the operation requires (P1, P2,
   * bounded growth, size limits).
   */
  NG_STATUS_PRECONDITION = 3,
  NG_STATUS_OUT_OF_RANGE = 4,
  /**
   * A verification run found counterexamples; the report is still
   * written.
   */
  NG_STATUS_COUNTEREXAMPLE = 5,
  NG_STATUS_INVALID_UTF8 = 6,
  NG_STATUS_PANIC = 7,
} NgStatus;

typedef enum NgGrowthClass {
  NG_GROWTH_CLASS_EXPONENTIAL = 0,
  NG_GROWTH_CLASS_POLYNOMIAL = 1,
  NG_GROWTH_CLASS_BOUNDED = 2,
} NgGrowthClass;

/**
 * Opaque matrix handle.
 */
typedef struct NgMatrix NgMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; do not free.
 */
const char *ng_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void ng_string_free(char *s);

/**
 * Parses `"110;010;001"` (rows separated by `;` or newlines).
 */
enum NgStatus ng_matrix_parse(const char *text, struct NgMatrix **out);

/**
 * Builds a matrix from `size` row masks; bit `j` of `rows[i]` is entry
 * `(i + 1, j + 1)`.
 */
enum NgStatus ng_matrix_from_rows(size_t size, const uint64_t *rows, struct NgMatrix **out);

void ng_matrix_free(struct NgMatrix *m);

/**
 * Side length, or 0 for a null handle.
 */
size_t ng_matrix_size(const struct NgMatrix *m);

enum NgStatus ng_matrix_to_text(const struct NgMatrix *m, char **out);

enum NgStatus ng_satisfies_p1(const struct NgMatrix *m, bool *out);

enum NgStatus ng_satisfies_p2(const struct NgMatrix *m, bool *out);

enum NgStatus ng_classify(const struct NgMatrix *m, enum NgGrowthClass *out);

/**
 * Full classification report as JSON (integers as decimal strings).
 */
enum NgStatus ng_classify_json(const struct NgMatrix *m, char **out);

/**
 * `["‖M^1‖", ..., "‖M^n‖"]` as a JSON array of decimal strings.
 */
enum NgStatus ng_norms_json(const struct NgMatrix *m, size_t n, char **out);

/**
 * Supremum of the norm sequence as a decimal string; bounded class only.
 */
enum NgStatus ng_sup_norm(const struct NgMatrix *m, char **out);

/**
 * Number of admissible infinite words; bounded class only.
 */
enum NgStatus ng_count_infinite(const struct NgMatrix *m, uint64_t *out);

/**
 * Canonical representative. When `witness` is non-null it receives the
 * `size` images (1-based) of the permutation mapping `m` onto it.
 */
enum NgStatus ng_canonical_form(const struct NgMatrix *m, struct NgMatrix **out, size_t *witness);

enum NgStatus ng_are_equivalent(const struct NgMatrix *a, const struct NgMatrix *b, bool *out);

enum NgStatus ng_is_sup_extremal(const struct NgMatrix *m, bool *out);

enum NgStatus ng_is_binomial_extremal(const struct NgMatrix *m, bool *out);

/**
 * Spectral radius; `error_bound` may be null.
 */
enum NgStatus ng_spectral_radius(const struct NgMatrix *m, double *value, double *error_bound);

/**
 * Dimension of the infinite word space; `error_bound` may be null.
 */
enum NgStatus ng_dimension(const struct NgMatrix *m, double *value, double *error_bound);

/**
 * Runs one verification claim and writes its JSON report. `b` and
 * `horizon` of 0 select the claim defaults. Returns
 * `NG_STATUS_COUNTEREXAMPLE` when the report is not clean.
 */
enum NgStatus ng_verify_json(const char *claim, size_t b, size_t horizon, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NORMGROWTH_H */
