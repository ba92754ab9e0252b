#ifndef KENDALL_BOUNDS_H
#define KENDALL_BOUNDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KbStatus {
  KB_STATUS_OK = 0,
  /**
   * file system or cache trouble
   */
  KB_STATUS_IO = 1,
  /**
   * n beyond the cap of the requested computation
   */
  KB_STATUS_CAP_EXCEEDED = 2,
  /**
   * the LP or SDP solver did not produce a trustworthy answer
   */
  KB_STATUS_SOLVER_FAILURE = 3,
  /**
   * dmin out of range or another malformed request
   */
  KB_STATUS_INVALID_ARGUMENT = 4,
  KB_STATUS_NULL_POINTER = 5,
  /**
   * a value does not fit the output type
   */
  KB_STATUS_OVERFLOW = 6,
  KB_STATUS_PANIC = 7,
} KbStatus;

/**
 * Caps, search budget and an optional cache directory shared by calls.
 */
typedef struct KbContext KbContext;

typedef struct KbClassCounts {
  uint64_t conj;
  uint64_t len;
  uint64_t theta_sym;
} KbClassCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *kb_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *kb_version(void);

/**
 * New context written to `*out`. `cache_dir` may be NULL for no disk cache.
 *
 * # Safety
 * `cache_dir` is NULL or a nul-terminated string; `out` is writable.
 */
enum KbStatus kb_context_new(const char *cache_dir, bool allow_large, struct KbContext **out);

/**
 * # Safety
 * `ctx` is NULL or came from `kb_context_new` and is not used afterwards.
 */
void kb_context_free(struct KbContext *ctx);

/**
 * Node budget for exact searches made through this context.
 *
 * # Safety
 * `ctx` came from `kb_context_new`.
 */
enum KbStatus kb_context_set_search_budget(struct KbContext *ctx, uint64_t nodes);

/**
 * Floored LP bound and the real optimum; either out-pointer may be NULL.
 *
 * # Safety
 * `ctx` came from `kb_context_new`; non-null out-pointers are writable.
 */
enum KbStatus kb_lp_bound(const struct KbContext *ctx,
                          uint32_t n,
                          uint32_t dmin,
                          uint64_t *out_bound,
                          double *out_raw);

/**
 * Floored dual SDP bound and the cutting-plane optimum (n <= 5).
 *
 * # Safety
 * As for `kb_lp_bound`.
 */
enum KbStatus kb_sdp_bound(const struct KbContext *ctx,
                           uint32_t n,
                           uint32_t dmin,
                           uint64_t *out_bound,
                           double *out_raw);

/**
 * Largest code found by exact search (n <= 5); `*out_exact` is false when
 * the node budget ran out first.
 *
 * # Safety
 * As for `kb_lp_bound`.
 */
enum KbStatus kb_max_code(const struct KbContext *ctx,
                          uint32_t n,
                          uint32_t dmin,
                          uint64_t *out_size,
                          bool *out_exact);

/**
 * # Safety
 * `out` is writable.
 */
enum KbStatus kb_singleton_bound(uint32_t n, uint32_t dmin, uint64_t *out);

/**
 * # Safety
 * `out` is writable.
 */
enum KbStatus kb_hamming_bound(uint32_t n, uint32_t dmin, uint64_t *out);

/**
 * Class counts for n, through the context's cache when it has one.
 *
 * # Safety
 * `ctx` came from `kb_context_new`; `out` is writable.
 */
enum KbStatus kb_ccstats(const struct KbContext *ctx, uint32_t n, struct KbClassCounts *out);

/**
 * JSON report for a comma-separated method list (lp,sb,hb,sdp,search).
 * The string is written to `*out` and must be released with
 * `kb_string_free`.
 *
 * # Safety
 * `ctx` came from `kb_context_new`; `methods` is a nul-terminated string;
 * `out` is writable.
 */
enum KbStatus kb_bound_json(const struct KbContext *ctx,
                            uint32_t n,
                            uint32_t dmin,
                            const char *methods,
                            char **out);

/**
 * # Safety
 * `s` is NULL or a string returned by this library, not yet freed.
 */
void kb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KENDALL_BOUNDS_H */
