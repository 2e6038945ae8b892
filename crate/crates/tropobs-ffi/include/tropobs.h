#ifndef TROPOBS_H
#define TROPOBS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TropMethod {
  TROP_METHOD_CHAIN = 0,
  TROP_METHOD_XI = 1,
} TropMethod;

typedef enum TropStatus {
  TROP_STATUS_OK = 0,
  TROP_STATUS_NULL_ARGUMENT = 1,
  TROP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or inconsistent input data.
   */
  TROP_STATUS_VALIDATION = 3,
  /**
   * Valid input outside the operation's domain.
   */
  TROP_STATUS_PRECONDITION = 4,
  TROP_STATUS_PANIC = 5,
} TropStatus;

/**
 * Opaque parsed curve.
 */
typedef struct TropCurve TropCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *trop_last_error(void);

/**
 * Library version as a static string.
 */
const char *trop_version(void);

/**
 * Parses and validates a curve document (JSON text).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TropStatus trop_curve_parse(const char *json, struct TropCurve **out);

/**
 * Releases a curve; NULL is ignored.
 *
 * # Safety
 * `c` must come from `trop_curve_parse` and not be used afterwards.
 */
void trop_curve_free(struct TropCurve *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum TropStatus trop_curve_genus(const struct TropCurve *c, size_t *out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum TropStatus trop_curve_ambient_dim(const struct TropCurve *c, size_t *out);

/**
 * e + (n-3)(1-g).
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum TropStatus trop_curve_expected_dim(const struct TropCurve *c, int64_t *out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum TropStatus trop_curve_is_immersive(const struct TropCurve *c, bool *out);

/**
 * dim H. `config_json` (may be NULL) supplies coordinates for the xi method.
 *
 * # Safety
 * `c` must be a live handle, `config_json` NULL or a NUL-terminated string,
 * `out` writable.
 */
enum TropStatus trop_obstruction_dim(const struct TropCurve *c,
                                     enum TropMethod method,
                                     const char *config_json,
                                     size_t *out);

/**
 * Obstruction report with kernel basis as JSON text.
 *
 * # Safety
 * As `trop_obstruction_dim`; free the result with `trop_string_free`.
 */
enum TropStatus trop_obstruction_json(const struct TropCurve *c,
                                      enum TropMethod method,
                                      const char *config_json,
                                      char **out);

/**
 * Runs the command line with arguments given as a JSON array of strings
 * (without the program name). Writes the exit code and standard output.
 *
 * # Safety
 * `args_json` must be a NUL-terminated string; outputs must be writable.
 */
enum TropStatus trop_cli_run(const char *args_json, int32_t *out_code, char **out_stdout);

/**
 * Releases a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void trop_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TROPOBS_H */
