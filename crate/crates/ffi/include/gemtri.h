#ifndef GEMTRI_H
#define GEMTRI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  GEMTRI_MODE_AUTO = 0,
  GEMTRI_MODE_CLOSED = 1,
  GEMTRI_MODE_GTS = 2,
} GemtriMode;

/**
 * Status codes; 1 to 4 match the command-line exit codes.
 */
typedef enum {
  GEMTRI_STATUS_OK = 0,
  GEMTRI_STATUS_INVALID = 1,
  GEMTRI_STATUS_NOT_IN_CLASS = 2,
  GEMTRI_STATUS_INTERNAL = 3,
  GEMTRI_STATUS_IO = 4,
  GEMTRI_STATUS_NULL_POINTER = 5,
  GEMTRI_STATUS_BAD_ARGUMENT = 6,
} GemtriStatus;

/**
 * Opaque parsed gem.
 */
typedef struct GemtriGem GemtriGem;

/**
 * Opaque pipeline result.
 */
typedef struct GemtriRun GemtriRun;

/**
 * Pipeline options. `apex < 0` lets the library choose; `eps` is read only
 * when `has_eps` is set and `sweep` is not.
 */
typedef struct {
  bool sweep;
  bool has_eps;
  uint8_t eps[5];
  int32_t apex;
  uint64_t budget;
  GemtriMode mode;
} GemtriOptions;

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *gemtri_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gemtri_version(void);

/**
 * Parse a gem in the text or JSON format.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes and `out` to writable storage for a pointer.
 */
GemtriStatus gemtri_gem_parse(const uint8_t *bytes, size_t len, GemtriGem **out);

/**
 * # Safety
 * `gem` must be NULL or a handle from [`gemtri_gem_parse`] not yet freed.
 */
void gemtri_gem_free(GemtriGem *gem);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `gem` must be NULL or a live handle.
 */
size_t gemtri_gem_order(const GemtriGem *gem);

/**
 * Twice the regular genus of the gem for the cyclic permutation `eps` (5 colors).
 *
 * # Safety
 * `gem` must be a live handle, `eps` must point to 5 bytes and `out` must be writable.
 */
GemtriStatus gemtri_gem_rho_twice(const GemtriGem *gem, const uint8_t *eps, int64_t *out);

/**
 * Run validation, trisection, diagram and ledger. `opts` may be NULL for defaults.
 *
 * # Safety
 * `gem` must be a live handle, `opts` NULL or valid, `out` writable.
 */
GemtriStatus gemtri_run(const GemtriGem *gem, const GemtriOptions *opts, GemtriRun **out);

/**
 * # Safety
 * `run` must be NULL or a handle from [`gemtri_run`] not yet freed.
 */
void gemtri_run_free(GemtriRun *run);

/**
 * Twice the trisection genus, or -1 for NULL.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
int64_t gemtri_run_genus_twice(const GemtriRun *run);

/**
 * Number of stabilizations, or -1 for NULL.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
int64_t gemtri_run_k(const GemtriRun *run);

/**
 * Whether every diagram check passed.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
bool gemtri_run_verified(const GemtriRun *run);

/**
 * The full run record as JSON, released with [`gemtri_string_free`].
 *
 * # Safety
 * `run` must be a live handle and `out` writable.
 */
GemtriStatus gemtri_run_json(const GemtriRun *run, char **out);

/**
 * Export the diagram as `"json"`, `"dot"` or `"svg"`, NUL-terminated,
 * released with [`gemtri_string_free`].
 *
 * # Safety
 * `run` must be a live handle, `format` a NUL-terminated string, `out` writable.
 */
GemtriStatus gemtri_run_export(const GemtriRun *run, const char *format, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void gemtri_string_free(char *s);

#endif  /* GEMTRI_H */
