#ifndef SBFS_H
#define SBFS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Search outcome codes, in the order `solved, exhausted, timeout, budget`.
 */
typedef enum SbfsOutcome {
  SBFS_OUTCOME_SOLVED = 0,
  SBFS_OUTCOME_EXHAUSTED = 1,
  SBFS_OUTCOME_TIMEOUT = 2,
  SBFS_OUTCOME_BUDGET = 3,
} SbfsOutcome;

typedef enum SbfsStatus {
  SBFS_STATUS_OK = 0,
  SBFS_STATUS_NULL_ARG = 1,
  SBFS_STATUS_UTF8 = 2,
  SBFS_STATUS_PARSE = 3,
  SBFS_STATUS_CONFIG = 4,
  SBFS_STATUS_SEARCH = 5,
  SBFS_STATUS_PANIC = 6,
} SbfsStatus;

/**
 * Opaque parsed problem.
 */
typedef struct SbfsProblem SbfsProblem;

/**
 * Opaque search result with its plan already rendered.
 */
typedef struct SbfsResult SbfsResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call on this thread.
 */
const char *sbfs_last_error(void);

/**
 * Parses and validates problem text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SbfsStatus sbfs_problem_parse(const char *text, struct SbfsProblem **out);

/**
 * Generates a benchmark instance from a spec such as `"sailing boats=2 persons=3"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum SbfsStatus sbfs_problem_generate(const char *spec, struct SbfsProblem **out);

/**
 * Renders the problem back to text; free the string with `sbfs_string_free`.
 *
 * # Safety
 * `problem` must come from this library; `out` must be writable.
 */
enum SbfsStatus sbfs_problem_serialize(const struct SbfsProblem *problem, char **out);

/**
 * # Safety
 * `problem` must be null or come from this library, and not be used after.
 */
void sbfs_problem_free(struct SbfsProblem *problem);

/**
 * Runs one search. `flags` uses the `plan solve` syntax, e.g.
 * `"--algo sa --rect lin --expansion-limit 10000"`; null means defaults.
 *
 * # Safety
 * `problem` must come from this library; `flags` must be null or a
 * NUL-terminated string; `out` must be writable.
 */
enum SbfsStatus sbfs_solve(const struct SbfsProblem *problem,
                           const char *flags,
                           struct SbfsResult **out);

/**
 * # Safety
 * `result` must be a live result handle.
 */
enum SbfsOutcome sbfs_result_outcome(const struct SbfsResult *result);

/**
 * Plan length, or -1 when no plan was found.
 *
 * # Safety
 * `result` must be a live result handle.
 */
int64_t sbfs_result_plan_len(const struct SbfsResult *result);

/**
 * # Safety
 * `result` must be a live result handle.
 */
uint64_t sbfs_result_expansions(const struct SbfsResult *result);

/**
 * Re-expansion rate in percent.
 *
 * # Safety
 * `result` must be a live result handle.
 */
double sbfs_result_reexp_rate(const struct SbfsResult *result);

/**
 * Wall time in seconds.
 *
 * # Safety
 * `result` must be a live result handle.
 */
double sbfs_result_time(const struct SbfsResult *result);

/**
 * Plan in text form (empty when unsolved); free with `sbfs_string_free`.
 *
 * # Safety
 * `result` must be a live result handle; `out` must be writable.
 */
enum SbfsStatus sbfs_result_plan_text(const struct SbfsResult *result, char **out);

/**
 * # Safety
 * `result` must be null or come from this library, and not be used after.
 */
void sbfs_result_free(struct SbfsResult *result);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void sbfs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SBFS_H */
