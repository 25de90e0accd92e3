#ifndef LEVYQ_H
#define LEVYQ_H

/* Generated by cbindgen from the levyq-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Output naming for [`levyq_poly_render`].
 */
typedef enum LevyqFormat {
  LEVYQ_FORMAT_PLAIN = 0,
  LEVYQ_FORMAT_LATEX = 1,
  /**
   * The JSON term-list form; it round-trips through the library parser.
   */
  LEVYQ_FORMAT_JSON = 2,
} LevyqFormat;

/**
 * Result code of every fallible call.
 */
typedef enum LevyqStatus {
  LEVYQ_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LEVYQ_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  LEVYQ_STATUS_UTF8 = 2,
  /**
   * Malformed input: model spec, config JSON, rational, or argument range.
   */
  LEVYQ_STATUS_INVALID_ARGUMENT = 3,
  /**
   * The requested degree exceeds the configured global bound.
   */
  LEVYQ_STATUS_ORDER_LIMIT = 4,
  /**
   * The model's moment data is truncated below the requested degree.
   */
  LEVYQ_STATUS_TRUNCATED = 5,
  /**
   * The operation is not defined for this model (no sampler, no
   * enumerable jumps, degenerate statistic).
   */
  LEVYQ_STATUS_UNSUPPORTED = 6,
  /**
   * Invariant violation or a caught panic.
   */
  LEVYQ_STATUS_INTERNAL = 7,
} LevyqStatus;

/**
 * Opaque process model handle.
 */
typedef struct LevyqModel LevyqModel;

/**
 * Opaque polynomial handle; remembers which variable naming it renders
 * with (`x1, x2, ...` for cumulant and variation polynomials, `x, t, ...`
 * for space-time polynomials).
 */
typedef struct LevyqPoly LevyqPoly;

/**
 * One Monte Carlo gate result. `pass` reports whether the estimate lies
 * within the gate width of the target.
 */
typedef struct LevyqVerdict {
  double estimate;
  double std_error;
  double target;
  bool pass;
  uint64_t n_paths;
} LevyqVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, as a NUL-terminated
 * string. The pointer stays valid until the next failing call on the same
 * thread; never free it.
 */
const char *levyq_last_error(void);

/**
 * Parse a named model spec (`brownian`, `poisson:RATE`, `gamma`,
 * `cp-lognormal`, `sum:A+B`).
 *
 * # Safety
 * `spec` must point to a NUL-terminated string; `out` must be a valid
 * pointer to a model-handle slot.
 */
enum LevyqStatus levyq_model_parse(const char *spec, struct LevyqModel **out);

/**
 * Build a model from config JSON: `{"sigma2": "p/q", "m": ["p/q", ...]}`.
 *
 * # Safety
 * `json` must point to a NUL-terminated string; `out` must be a valid
 * pointer to a model-handle slot.
 */
enum LevyqStatus levyq_model_from_json(const char *json, struct LevyqModel **out);

/**
 * Canonical name of the model, as a fresh string for
 * [`levyq_string_free`].
 *
 * # Safety
 * `model` must be a live handle from a constructor; `out` must be a valid
 * pointer to a string slot.
 */
enum LevyqStatus levyq_model_name(const struct LevyqModel *model, char **out);

/**
 * Release a model handle. Null is a no-op.
 *
 * # Safety
 * `model` must be null or a handle not freed before.
 */
void levyq_model_free(struct LevyqModel *model);

/**
 * The cumulant-to-moment polynomial of the given degree, in `x1..xn`.
 *
 * # Safety
 * `out` must be a valid pointer to a polynomial-handle slot.
 */
enum LevyqStatus levyq_gamma(uint32_t n, struct LevyqPoly **out);

/**
 * The time-space harmonic polynomial `Q_n(x, t)` of the model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be a valid pointer to a
 * polynomial-handle slot.
 */
enum LevyqStatus levyq_harmonic(const struct LevyqModel *model, uint32_t n, struct LevyqPoly **out);

/**
 * The Kailath-Segall polynomial of the given degree, in `x1..xn`.
 *
 * # Safety
 * `out` must be a valid pointer to a polynomial-handle slot.
 */
enum LevyqStatus levyq_ks(uint32_t n, struct LevyqPoly **out);

/**
 * The moment `E[X_t^n]` of the model as a polynomial in `t`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be a valid pointer to a
 * polynomial-handle slot.
 */
enum LevyqStatus levyq_moment(const struct LevyqModel *model, uint32_t n, struct LevyqPoly **out);

/**
 * Release a polynomial handle. Null is a no-op.
 *
 * # Safety
 * `poly` must be null or a handle not freed before.
 */
void levyq_poly_free(struct LevyqPoly *poly);

/**
 * Render a polynomial in the requested format, as a fresh string for
 * [`levyq_string_free`]. The JSON form is the bare term array.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be a valid pointer to a string
 * slot.
 */
enum LevyqStatus levyq_poly_render(const struct LevyqPoly *poly,
                                   enum LevyqFormat format,
                                   char **out);

/**
 * Evaluate a polynomial at the point `values`, where `values[i]` binds the
 * variable with id `i` in the handle's naming (`x1`/`x` is id 0, `x2`/`t`
 * is id 1, and so on). For space-time polynomials the constant `e^{1/2}`
 * is bound automatically. Variables at ids past `len` are an error.
 *
 * # Safety
 * `poly` must be a live handle; `values` must point to `len` doubles;
 * `out` must be a valid pointer to a double.
 */
enum LevyqStatus levyq_poly_eval(const struct LevyqPoly *poly,
                                 const double *values,
                                 size_t len,
                                 double *out);

/**
 * Release a string returned through an out-pointer. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void levyq_string_free(char *s);

/**
 * Current global degree bound.
 */
uint32_t levyq_max_order(void);

/**
 * Set the global degree bound (process-wide).
 */
void levyq_set_max_order(uint32_t limit);

/**
 * Monte Carlo martingale gate: draws `n_paths` seeded paths and fills
 * `out[0]` with the verdict on `mean Q_n(X_t, t) = 0` and `out[1]` with
 * the verdict on the `s` to `t` increment. A failing gate still returns
 * `LEVYQ_STATUS_OK`; inspect the `pass` fields.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to two verdict slots.
 */
enum LevyqStatus levyq_verify_martingale(const struct LevyqModel *model,
                                         uint32_t n,
                                         double s,
                                         double t,
                                         size_t n_paths,
                                         uint64_t seed,
                                         struct LevyqVerdict *out);

/**
 * Monte Carlo orthogonality gate on the iterated-integral product
 * `P^(n) P^(m)` at time `t`. A failing gate still returns
 * `LEVYQ_STATUS_OK`; inspect the `pass` field.
 *
 * # Safety
 * `model` must be a live handle; `out` must point to one verdict slot.
 */
enum LevyqStatus levyq_verify_orthogonality(const struct LevyqModel *model,
                                            uint32_t n,
                                            uint32_t m,
                                            double t,
                                            size_t n_paths,
                                            uint64_t seed,
                                            struct LevyqVerdict *out);

/**
 * Run the deterministic symbolic identity suite; returns the number of
 * failed checks (zero on a healthy build).
 */
uint32_t levyq_selftest(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LEVYQ_H */
