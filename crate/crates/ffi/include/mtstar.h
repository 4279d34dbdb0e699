#ifndef MTSTAR_H
#define MTSTAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum MtsStatus {
  MTS_STATUS_OK = 0,
  // A required pointer argument was null.
  MTS_STATUS_NULL_POINTER = 1,
  // Index, block or parameter text did not parse.
  MTS_STATUS_PARSE = 2,
  // Arguments parsed but lie outside the operation's domain.
  MTS_STATUS_DOMAIN = 3,
  // A string argument was not valid UTF-8.
  MTS_STATUS_UTF8 = 4,
  // A caller-supplied buffer was too small.
  MTS_STATUS_BUFFER = 5,
  // An internal panic was caught at the boundary.
  MTS_STATUS_PANIC = 6,
} MtsStatus;

// Evaluation settings and a memo of computed t-values.
typedef struct MtsContext MtsContext;

// A truncated value: estimate, error indicator and provenance.
typedef struct MtsValue MtsValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a context with `digits` decimal digits (at least 10) and `terms`
// summation terms (at least 1).
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum MtsStatus mts_context_new(uint32_t digits, uint64_t terms, struct MtsContext **out);

// Releases a context. Null is ignored.
//
// # Safety
// `ctx` must come from [`mts_context_new`] and not be used afterwards.
void mts_context_free(struct MtsContext *ctx);

// Direct star sum t★(s) for an index such as "3,1,2".
//
// # Safety
// `ctx` must be live, `index` a nul-terminated string, `out` writable.
enum MtsStatus mts_t_star_direct(const struct MtsContext *ctx,
                                 const char *index,
                                 struct MtsValue **out);

// Strict nested sum t(s); entries prefixed with `~` alternate in sign.
//
// # Safety
// As for [`mts_t_star_direct`].
enum MtsStatus mts_nested_t_sum(const struct MtsContext *ctx,
                                const char *index,
                                struct MtsValue **out);

// Star value of a block form "a0:c1:a1:…" from its closed shell sum with
// `shells` outer terms.
//
// # Safety
// As for [`mts_t_star_direct`].
enum MtsStatus mts_t_star_closed_blocks(const struct MtsContext *ctx,
                                        const char *blocks,
                                        uint64_t shells,
                                        struct MtsValue **out);

// Exact finite star sum t★_n(s), written as "p/q".
//
// # Safety
// `index` must be a nul-terminated string and `out` writable. Free the
// result with [`mts_string_free`].
enum MtsStatus mts_t_harmonic_star(uint64_t n, const char *index, char **out);

// Compares a closed formula ("thm41" … "thm49", "liwang42") with parameters
// such as "a=1,b=0" against the direct oracle. Writes the JSON report.
//
// # Safety
// `ctx` must be live, the strings nul-terminated and `out` writable. Free
// the result with [`mts_string_free`].
enum MtsStatus mts_cross_check(const struct MtsContext *ctx,
                               const char *formula_id,
                               const char *params,
                               double tolerance,
                               char **out);

// Decimal estimate, valid while `v` lives. Null if `v` is null.
//
// # Safety
// `v` must be null or a live value.
const char *mts_value_estimate(const struct MtsValue *v);

// Error indicator rounded up to four significant digits, valid while `v`
// lives. Null if `v` is null.
//
// # Safety
// `v` must be null or a live value.
const char *mts_value_error_indicator(const struct MtsValue *v);

// Estimate rounded to double precision (NaN if `v` is null).
//
// # Safety
// `v` must be null or a live value.
double mts_value_to_f64(const struct MtsValue *v);

// Number of terms or shells summed.
//
// # Safety
// `v` must be null or a live value.
uint64_t mts_value_terms_used(const struct MtsValue *v);

// 1 if the error indicator is a proved bound, 0 if heuristic or `v` is null.
//
// # Safety
// `v` must be null or a live value.
int32_t mts_value_is_rigorous(const struct MtsValue *v);

// Copies the estimate into `buf` (capacity `cap` bytes, including the nul).
//
// # Safety
// `v` must be live and `buf` writable for `cap` bytes.
enum MtsStatus mts_value_copy_estimate(const struct MtsValue *v, char *buf, size_t cap);

// Releases a value. Null is ignored.
//
// # Safety
// `v` must come from this library and not be used afterwards.
void mts_value_free(struct MtsValue *v);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void mts_string_free(char *s);

// Message for the last failed call on this thread (empty after success).
// Valid until the next call into the library on the same thread.
const char *mts_last_error_message(void);

// Library version as a static string.
const char *mts_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MTSTAR_H */
