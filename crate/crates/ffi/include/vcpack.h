#ifndef VCPACK_H
#define VCPACK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every entry point.
typedef enum VcpackStatus {
  VCPACK_STATUS_OK = 0,
  VCPACK_STATUS_NULL_POINTER = 1,
  VCPACK_STATUS_INVALID_ARGUMENT = 2,
  VCPACK_STATUS_DOMAIN = 3,
  VCPACK_STATUS_DIVERGENCE = 4,
  VCPACK_STATUS_PRECONDITION = 5,
  VCPACK_STATUS_BUDGET_EXCEEDED = 6,
  VCPACK_STATUS_PARSE = 7,
  VCPACK_STATUS_OVERFLOW = 8,
  VCPACK_STATUS_THEOREM_VIOLATION = 9,
  VCPACK_STATUS_IO = 10,
  VCPACK_STATUS_PANIC = 11,
} VcpackStatus;

// Identifies a bound for [`vcpack_bound`].
typedef enum VcpackBound {
  // e (d+1) (2e/eps)^d; uses `eps`, `d`.
  VCPACK_BOUND_HAUSSLER_UPPER = 0,
  // 100 * 2^(d beta(gamma)); uses `gamma`, `d`.
  VCPACK_BOUND_ENTROPY_RATE_UPPER = 1,
  // 34 k^d 2^(d/delta(gamma,k)); uses `gamma`, `k`, `d`, `n`.
  VCPACK_BOUND_KARY_UPPER = 2,
  // (1/(2e(eps + d/n)))^d; `n = 0` takes the limit n -> infinity.
  VCPACK_BOUND_HAUSSLER_LOWER = 3,
  // n (1 - gamma^2) / (1 - n gamma^2); uses `n`, `gamma`.
  VCPACK_BOUND_ROTH_SEROUSSI = 4,
  // Gilbert-Varshamov; uses `n` and `d` as the minimum distance.
  VCPACK_BOUND_GV_LOWER = 5,
  // sum_{i<=d} C(n,i).
  VCPACK_BOUND_SAUER_UPPER = 6,
  // sum_{i<=d} C(n,i) k^i.
  VCPACK_BOUND_GENERALIZED_SAUER = 7,
} VcpackBound;

// Opaque function class handle.
typedef struct VcpackFamily VcpackFamily;

// Inputs for [`vcpack_bound`]; unused fields are ignored.
typedef struct VcpackBoundInput {
  double eps;
  double gamma;
  uint64_t d;
  uint64_t n;
  uint64_t k;
  // Interval precision in bits; 0 selects the default.
  uint32_t precision_bits;
} VcpackBoundInput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *vcpack_last_error(void);

// Binary entropy in bits.
enum VcpackStatus vcpack_binary_entropy(double x, double *out);

// Inverse of binary entropy on [0, 1/2].
enum VcpackStatus vcpack_entropy_inverse(double y, double *out);

// beta(gamma) = 1 / H^-1(log2(2/(1+gamma))).
enum VcpackStatus vcpack_beta(double gamma, double *out);

// delta(gamma, k) on the default search interval.
enum VcpackStatus vcpack_delta(double gamma, uint32_t k, double *out);

// Evaluates a bound. `value` receives the value (possibly +inf when it
// overflows a double) and `log2_value` its base-2 logarithm; either may be
// NULL. A bound whose preconditions fail returns `PRECONDITION`.
//
// # Safety
// `input` must point to a valid `VcpackBoundInput`; `value` and
// `log2_value` must be NULL or valid for writes.
enum VcpackStatus vcpack_bound(enum VcpackBound which,
                               const struct VcpackBoundInput *input,
                               double *value,
                               double *log2_value);

// Parses the text family format (`k n m` header, then m rows).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum VcpackStatus vcpack_family_parse(const char *text, struct VcpackFamily **out);

// Rows of the Sylvester-Hadamard matrix of order 2^order_exp.
enum VcpackStatus vcpack_family_hadamard(uint32_t order_exp, struct VcpackFamily **out);

// Random sign matrix with max |<x,y>| <= gamma. `m = 0` selects
// floor(exp(n gamma^2 / 4)). Returns `BUDGET_EXCEEDED` when every attempt
// is rejected.
enum VcpackStatus vcpack_family_random(size_t n,
                                       double gamma,
                                       size_t m,
                                       uint64_t seed,
                                       size_t max_attempts,
                                       struct VcpackFamily **out);

// Releases a family handle. NULL is ignored.
//
// # Safety
// `f` must be NULL or a handle from this library not yet freed.
void vcpack_family_free(struct VcpackFamily *f);

// Alphabet size, coordinate count and number of vectors.
enum VcpackStatus vcpack_family_shape(const struct VcpackFamily *f,
                                      uint32_t *k,
                                      size_t *n,
                                      size_t *m);

// VC dimension of a binary family. `budget = 0` searches exhaustively;
// otherwise `lower` and `upper` bracket the dimension when the budget runs
// out.
enum VcpackStatus vcpack_family_vc_dimension(const struct VcpackFamily *f,
                                             uint64_t budget,
                                             size_t *lower,
                                             size_t *upper);

// Exact orthogonality max |<x,y>| (binary) or max |gamma_k| (k-ary) as
// `num/den`.
enum VcpackStatus vcpack_family_gamma(const struct VcpackFamily *f, int64_t *num, int64_t *den);

// Largest subset with pairwise normalized distance >= eps_num/eps_den.
// `exact` receives 0 when the node budget ran out.
enum VcpackStatus vcpack_family_packing(const struct VcpackFamily *f,
                                        int64_t eps_num,
                                        int64_t eps_den,
                                        uint64_t budget,
                                        size_t *size,
                                        int32_t *exact);

// Family in the text format; release with [`vcpack_string_free`].
enum VcpackStatus vcpack_family_to_text(const struct VcpackFamily *f, char **out);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string from this library not yet freed.
void vcpack_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VCPACK_H */
