/* C interface of the fibered-Lagrangian invariant engine.
 * Generated by cbindgen; do not edit by hand. */

#ifndef BRIESKORN_H
#define BRIESKORN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of a C-ABI call. The failure values 2-5 match the process
 * exit codes of the command-line tool; values from 10 up are specific
 * to the binary interface.
 */
typedef enum BkStatus {
  /**
   * Success.
   */
  BkOk = 0,
  /**
   * Malformed recipe, parameters out of range, or a corrupted file.
   */
  BkErrSchema = 2,
  /**
   * Geometric degeneracy (tangency, degenerate polygon, ...).
   */
  BkErrGeometry = 3,
  /**
   * A certificate was refused; nothing was asserted.
   */
  BkErrNotCertified = 4,
  /**
   * A cross-check that must hold came out false.
   */
  BkErrDiscrepancy = 5,
  /**
   * A required pointer argument was null.
   */
  BkErrNullArgument = 10,
  /**
   * A string argument was not valid UTF-8.
   */
  BkErrUtf8 = 11,
  /**
   * Internal failure (a bug, not a property of the input).
   */
  BkErrInternal = 12,
} BkStatus;

/**
 * Opaque handle to a realized construction.
 */
typedef struct BkConstruction BkConstruction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a recipe or a full construction file (JSON) into a handle.
 * On success `*out` owns the handle.
 */
enum BkStatus bk_construction_parse(const char *json, struct BkConstruction **out);

/**
 * Release a handle. Null is ignored.
 */
void bk_construction_free(struct BkConstruction *handle);

/**
 * Release a string returned by this library. Null is ignored.
 */
void bk_string_free(char *text);

/**
 * Human-readable message of the most recent failure on this thread;
 * the empty string after a success. Do not free.
 */
const char *bk_last_error_message(void);

/**
 * The construction's name, e.g. `T_{1,2,0}`.
 */
enum BkStatus bk_construction_name(const struct BkConstruction *handle, char **out);

/**
 * The full self-verifying construction file as JSON.
 */
enum BkStatus bk_construction_file_json(const struct BkConstruction *handle, char **out);

/**
 * The complete invariant report as JSON. A refused certificate still
 * produces the report (carrying its structured `not-certified`
 * entries); only a failure to compute anything returns an error.
 */
enum BkStatus bk_invariant_report_json(const struct BkConstruction *handle, char **out);

/**
 * A deterministic SVG drawing of the construction.
 */
enum BkStatus bk_render_svg(const struct BkConstruction *handle, char **out);

/**
 * Maslov numbers of the distinguished classes. Writes up to `cap`
 * values into `buf` and stores the full count in `*len`; when the
 * vector is longer than `cap` the call still succeeds, so call once
 * with `cap = 0` to size the buffer.
 */
enum BkStatus bk_maslov_vector(const struct BkConstruction *handle,
                               int64_t *buf,
                               uintptr_t cap,
                               uintptr_t *len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BRIESKORN_H */
