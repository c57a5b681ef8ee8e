#ifndef QP_RECUR_H
#define QP_RECUR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QpStatus {
  QP_STATUS_OK = 0,
  // Input outside the domain of the operation.
  QP_STATUS_DOMAIN = 1,
  // Invalid argument (bad prime, precision, mismatched contexts).
  QP_STATUS_USAGE = 2,
  // Malformed text or JSON.
  QP_STATUS_PARSE = 3,
  // A self-check failed.
  QP_STATUS_INTERNAL = 4,
  QP_STATUS_NULL_POINTER = 5,
  QP_STATUS_INVALID_UTF8 = 6,
  QP_STATUS_PANIC = 7,
} QpStatus;

typedef enum QpValuationKind {
  // The valuation is exactly the reported value.
  QP_VALUATION_KIND_FINITE = 0,
  // Precision ran out; the valuation is at least the reported value.
  QP_VALUATION_KIND_AT_LEAST = 1,
  // Exact zero.
  QP_VALUATION_KIND_INFINITE = 2,
} QpValuationKind;

// Working context: an odd prime and an absolute precision.
typedef struct QpContext QpContext;

// A p-adic number known modulo a power of p.
typedef struct QpNumber QpNumber;

// Parameter sequences of a recursion problem.
typedef struct QpProblem QpProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *qp_last_error_message(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void qp_string_free(char *s);

// # Safety
// `out` must be a valid pointer to writable storage.
enum QpStatus qp_context_new(uint32_t p, uint32_t precision, struct QpContext **out);

// # Safety
// `ctx` must be null or a handle from [`qp_context_new`] not yet freed.
void qp_context_free(struct QpContext *ctx);

// `num / den` in the context.
//
// # Safety
// `ctx` must be a live context handle and `out` valid for writing.
enum QpStatus qp_number_from_rational(const struct QpContext *ctx,
                                      int64_t num,
                                      int64_t den,
                                      struct QpNumber **out);

// Read a rational literal `num/den`, an integer, or the canonical form `p^v * [d0,d1,...]`.
//
// # Safety
// `ctx` must be a live context handle, `literal` a nul-terminated string and `out` valid for writing.
enum QpStatus qp_number_parse(const struct QpContext *ctx,
                              const char *literal,
                              struct QpNumber **out);

// Canonical text form; release with [`qp_string_free`].
//
// # Safety
// `x` must be a live number handle and `out` valid for writing.
enum QpStatus qp_number_format(const struct QpNumber *x, char **out);

// # Safety
// `x` must be null or a number handle not yet freed.
void qp_number_free(struct QpNumber *x);

// # Safety
// `x`, `y` must be live number handles and `out` valid for writing.
enum QpStatus qp_number_add(const struct QpNumber *x,
                            const struct QpNumber *y,
                            struct QpNumber **out);

// # Safety
// `x`, `y` must be live number handles and `out` valid for writing.
enum QpStatus qp_number_sub(const struct QpNumber *x,
                            const struct QpNumber *y,
                            struct QpNumber **out);

// # Safety
// `x`, `y` must be live number handles and `out` valid for writing.
enum QpStatus qp_number_mul(const struct QpNumber *x,
                            const struct QpNumber *y,
                            struct QpNumber **out);

// Division by an exact or precision-exhausted zero is a domain error.
//
// # Safety
// `x`, `y` must be live number handles and `out` valid for writing.
enum QpStatus qp_number_div(const struct QpNumber *x,
                            const struct QpNumber *y,
                            struct QpNumber **out);

// `v_p(x)`. For exact zero `value` is set to `INT64_MAX`.
//
// # Safety
// `x` must be a live number handle; `value` and `kind` valid for writing.
enum QpStatus qp_number_valuation(const struct QpNumber *x,
                                  int64_t *value,
                                  enum QpValuationKind *kind);

// Whether `x = y` modulo `p^k`; a usage error if either is not known that far.
//
// # Safety
// `x`, `y` must be live number handles and `out` valid for writing.
enum QpStatus qp_number_equals_mod(const struct QpNumber *x,
                                   const struct QpNumber *y,
                                   int64_t k,
                                   bool *out);

// `exp_p(x)` for `v(x) >= 1`.
//
// # Safety
// `x` must be a live number handle and `out` valid for writing.
enum QpStatus qp_exp(const struct QpNumber *x, struct QpNumber **out);

// `log_p(x)` for `v(x - 1) >= 1`.
//
// # Safety
// `x` must be a live number handle and `out` valid for writing.
enum QpStatus qp_log(const struct QpNumber *x, struct QpNumber **out);

// Load a problem file: `{"p": .., "precision": .., "alpha": {"preamble": [..], "period": [..]}, "beta": .., "gamma": ..}`.
//
// # Safety
// `json` must be a nul-terminated string and `out` valid for writing.
enum QpStatus qp_problem_from_json(const char *json,
                                   struct QpProblem **out);

// # Safety
// `problem` must be null or a problem handle not yet freed.
void qp_problem_free(struct QpProblem *problem);

// `h_n` modulo `p^k`.
//
// # Safety
// `problem` must be a live problem handle and `out` valid for writing.
enum QpStatus qp_solve(const struct QpProblem *problem,
                       uint64_t n,
                       int64_t k,
                       struct QpNumber **out);

// Full solution report as JSON; release with [`qp_string_free`].
//
// # Safety
// `problem` must be a live problem handle and `out` valid for writing.
enum QpStatus qp_solve_json(const struct QpProblem *problem, uint64_t n, int64_t k, char **out);

// Whether `a_k + b_k = c_k + 1` for `k = 1..=horizon`.
//
// # Safety
// `problem` must be a live problem handle and `out` valid for writing.
enum QpStatus qp_check_case1(const struct QpProblem *problem, uint64_t horizon, bool *out);

// Fixed point zeta of `((a u + b)/(c + u))^2` modulo `p^k` for constant parameters.
//
// # Safety
// `alpha`, `beta`, `gamma` must be live number handles and `out` valid for writing.
enum QpStatus qp_solve_stationary(const struct QpNumber *alpha,
                                  const struct QpNumber *beta,
                                  const struct QpNumber *gamma,
                                  int64_t k,
                                  struct QpNumber **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QP_RECUR_H */
