#ifndef WRT_CAPI_H
#define WRT_CAPI_H

/* Generated by cbindgen from the wrt-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum WrtStatus {
  /**
   * Success.
   */
  WRT_OK = 0,
  /**
   * A required pointer argument was null.
   */
  WRT_NULL_ARGUMENT = 1,
  /**
   * An input string was not valid UTF-8.
   */
  WRT_INVALID_UTF8 = 2,
  /**
   * The input violated the JSON schema or a numeric precondition.
   */
  WRT_SCHEMA_ERROR = 3,
  /**
   * Valid input outside the supported domain (e.g. the excluded root).
   */
  WRT_UNSUPPORTED = 4,
  /**
   * Exact arithmetic contradicted a verified identity.
   */
  WRT_FALSIFIED = 5,
  /**
   * Internal failure (a panic was caught).
   */
  WRT_INTERNAL = 6,
} WrtStatus;

/**
 * Opaque handle: a validated surgery presentation.
 */
typedef struct WrtPresentation WrtPresentation;

/**
 * Opaque handle: a root-of-unity specification.
 */
typedef struct WrtRoot WrtRoot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on the calling thread.
 *
 * The pointer stays valid until the next failing call on the same thread;
 * the caller must not free it.
 */
const char *wrt_last_error(void);

/**
 * Release a string returned through an `char**` out-parameter.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library, or null.
 */
void wrt_string_free(char *s);

/**
 * Allocate a root specification; `group` is 0 for the odd-order quotient
 * theory, 1 for the full theory. Pass `u = 0` to select the canonical
 * fourth-root exponent for `r`.
 *
 * The excluded case — a fourth root of order `2r` in the full theory, where
 * no invariant is defined — is refused with `WrtUnsupported`.
 *
 * # Safety
 * `out` must be a valid pointer; the result must be freed with
 * [`wrt_root_free`].
 */
enum WrtStatus wrt_root_new(uint64_t r, uint64_t u, int32_t group, struct WrtRoot **out);

/**
 * Release a root handle.
 *
 * # Safety
 * `root` must come from [`wrt_root_new`], or be null.
 */
void wrt_root_free(struct WrtRoot *root);

/**
 * Parse and validate a presentation from its JSON document
 * `{"surgery":[{"framing":b,"companion":{"color":s,"framing":p}|null},…]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` a valid pointer; the result
 * must be freed with [`wrt_presentation_free`].
 */
enum WrtStatus wrt_presentation_parse(const char *json, struct WrtPresentation **out);

/**
 * Release a presentation handle.
 *
 * # Safety
 * `pres` must come from [`wrt_presentation_parse`], or be null.
 */
void wrt_presentation_free(struct WrtPresentation *pres);

/**
 * Compute the normalized invariant; the result is a JSON document owned by
 * the caller.
 *
 * # Safety
 * `root` and `pres` must be live handles from this library, `out` a valid
 * pointer; the string must be freed with [`wrt_string_free`].
 */
enum WrtStatus wrt_tau(const struct WrtRoot *root, const struct WrtPresentation *pres, char **out);

/**
 * Compute the induced invariant of the double-cover quotient theory.
 *
 * # Safety
 * Same contract as [`wrt_tau`].
 */
enum WrtStatus wrt_tau_z2(const struct WrtRoot *root,
                          const struct WrtPresentation *pres,
                          char **out);

/**
 * Check that the full invariant of `pres` at `(r, u)` splits as the product
 * of the two quotient invariants; `*holds` receives the verdict.
 *
 * # Safety
 * `pres` must be a live handle, `holds` a valid pointer.
 */
enum WrtStatus wrt_check_splitting(uint64_t r,
                                   uint64_t u,
                                   const struct WrtPresentation *pres,
                                   bool *holds);

/**
 * Run the divisibility oracles for the twisted sums at the given root over
 * framings `bs[0..len]`; the per-check report is returned as JSON.
 *
 * # Safety
 * `root` must be a live handle, `bs` must point to `len` readable entries,
 * `out` must be valid; the string must be freed with [`wrt_string_free`].
 */
enum WrtStatus wrt_integrality_oracles(const struct WrtRoot *root,
                                       const int64_t *bs,
                                       uintptr_t len,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WRT_CAPI_H */
