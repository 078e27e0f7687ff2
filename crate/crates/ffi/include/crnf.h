#ifndef CRNF_H
#define CRNF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CrnfStatus {
  CRNF_STATUS_OK = 0,
  /**
   * Null pointer or invalid UTF-8.
   */
  CRNF_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed document or invalid input values.
   */
  CRNF_STATUS_PARSE = 2,
  /**
   * Degenerate Δ or singular kernel system. A report may still be written.
   */
  CRNF_STATUS_DOMAIN = 3,
  CRNF_STATUS_INTERNAL = 4,
} CrnfStatus;

/**
 * Opaque truncated manifold.
 */
typedef struct CrnfManifold CrnfManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. Owned by the library.
 */
const char *crnf_last_error(void);

/**
 * Parses a manifold document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrnfStatus crnf_manifold_from_json(const char *json, struct CrnfManifold **out);

/**
 * Seeded random manifold; `profile` is "pure-only", "mixed" or "generic".
 *
 * # Safety
 * `profile` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrnfStatus crnf_manifold_random(uint64_t seed,
                                     uint32_t n_vars,
                                     uint32_t degree,
                                     uint32_t s,
                                     const char *profile,
                                     struct CrnfManifold **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed; null is ignored.
 */
void crnf_manifold_free(struct CrnfManifold *m);

/**
 * Number of variables N, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uint32_t crnf_manifold_n_vars(const struct CrnfManifold *m);

/**
 * Truncation degree D, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uint32_t crnf_manifold_degree(const struct CrnfManifold *m);

/**
 * Canonical manifold document.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CrnfStatus crnf_manifold_to_json(const struct CrnfManifold *m, char **out);

/**
 * Invariants report (s, Δ, partials, nondegeneracy).
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CrnfStatus crnf_invariants(const struct CrnfManifold *m, char **out);

/**
 * Partial normal form report with map and certificate.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CrnfStatus crnf_moser(const struct CrnfManifold *m, char **out);

/**
 * Full normalization report. On `CRNF_STATUS_DOMAIN` a report with the degeneracy witness
 * is still written to `out`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CrnfStatus crnf_normalize(const struct CrnfManifold *m, bool verify_after, char **out);

/**
 * Residuals of every normal form condition on `m` as given.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CrnfStatus crnf_verify(const struct CrnfManifold *m, char **out);

/**
 * Pushes `m` forward by a map document; the report carries the image.
 *
 * # Safety
 * `m` must be a live handle, `map_json` a NUL-terminated string and `out` a valid pointer.
 */
enum CrnfStatus crnf_apply(const struct CrnfManifold *m, const char *map_json, char **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void crnf_string_free(char *s);

/**
 * Library version, static storage.
 */
const char *crnf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRNF_H */
