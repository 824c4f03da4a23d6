#ifndef SPINLAB_H
#define SPINLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpinlabConvention {
  SPINLAB_CONVENTION_QUOTIENT = 0,
  SPINLAB_CONVENTION_COVER = 1,
} SpinlabConvention;

typedef enum SpinlabForm {
  /**
   * `Σ xᵢ²`.
   */
  SPINLAB_FORM_FA = 0,
  /**
   * `Σ (x₂ᵢ² − x₂ᵢ₋₁²)`.
   */
  SPINLAB_FORM_FS = 1,
} SpinlabForm;

typedef enum SpinlabStatus {
  SPINLAB_STATUS_OK = 0,
  /**
   * Null pointer, malformed string or violated precondition.
   */
  SPINLAB_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A computation or verification did not succeed.
   */
  SPINLAB_STATUS_FAILED = 2,
  /**
   * A Rust panic was caught at the boundary.
   */
  SPINLAB_STATUS_PANIC = 3,
} SpinlabStatus;

/**
 * Opaque multivector over a diagonal form.
 */
typedef struct SpinlabMultivector SpinlabMultivector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *spinlab_last_error(void);

/**
 * Library version as a static string.
 */
const char *spinlab_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void spinlab_string_free(char *s);

/**
 * Releases a multivector handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from this library not yet freed.
 */
void spinlab_multivector_free(struct SpinlabMultivector *h);

/**
 * The coroot `hᵢ(t)` over `f_s` in dimension `dim`; `t` is a rational such as `"3/2"`.
 *
 * # Safety
 * `t` must be a nul-terminated string and `out` writable.
 */
enum SpinlabStatus spinlab_coroot(size_t dim,
                                  uint8_t i,
                                  const char *t,
                                  struct SpinlabMultivector **out);

/**
 * The basis blade `e_{idx[0]} ⋯ e_{idx[len-1]}` (1-based) over `form`.
 *
 * # Safety
 * `idx` must point to `len` readable values and `out` be writable.
 */
enum SpinlabStatus spinlab_basis_blade(enum SpinlabForm form,
                                       size_t dim,
                                       const size_t *idx,
                                       size_t len,
                                       struct SpinlabMultivector **out);

/**
 * Geometric product `a b`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum SpinlabStatus spinlab_multivector_gp(const struct SpinlabMultivector *a,
                                          const struct SpinlabMultivector *b,
                                          struct SpinlabMultivector **out);

/**
 * The reversal `a′`.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum SpinlabStatus spinlab_multivector_reverse(const struct SpinlabMultivector *a,
                                               struct SpinlabMultivector **out);

/**
 * Whether `a` and `b` are equal, written to `out`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum SpinlabStatus spinlab_multivector_eq(const struct SpinlabMultivector *a,
                                          const struct SpinlabMultivector *b,
                                          bool *out);

/**
 * Canonical text form of `a`, terms `c·e{i,j,…}` in blade order.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum SpinlabStatus spinlab_multivector_to_string(const struct SpinlabMultivector *a, char **out);

/**
 * Whether `a` lies in the spin group; on rejection the reason is left in
 * [`spinlab_last_error`] while the status stays `Ok`.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum SpinlabStatus spinlab_multivector_is_spin(const struct SpinlabMultivector *a, bool *out);

/**
 * `(a, b)_v` for rationals `a`, `b` and a place `"inf"`, `"2"` or an odd prime.
 *
 * # Safety
 * All strings must be nul-terminated and `out` writable.
 */
enum SpinlabStatus spinlab_hilbert_symbol(const char *a,
                                          const char *b,
                                          const char *place,
                                          int8_t *out);

/**
 * Number of reduced primitive forms of negative discriminant `d`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SpinlabStatus spinlab_class_number(int64_t d, uint64_t *out);

/**
 * Certificate JSON for `approx_unit(a, (ideal))`.
 *
 * # Safety
 * Strings must be nul-terminated and `out` writable.
 */
enum SpinlabStatus spinlab_approx_unit(const char *a, const char *ideal, char **out);

/**
 * Width report JSON for `gcl(element)` in the quotient mod `modulus`.
 * `element` is `id`, a blade such as `e12`, or `gen<k>`, optionally negated;
 * `group_cap = 0` selects the default cap.
 *
 * # Safety
 * `element` must be nul-terminated and `out` writable.
 */
enum SpinlabStatus spinlab_width(enum SpinlabForm form,
                                 size_t dim,
                                 uint64_t modulus,
                                 const char *element,
                                 uint32_t cap,
                                 enum SpinlabConvention convention,
                                 size_t group_cap,
                                 char **out);

/**
 * Re-verifies a certificate or spin-pair JSON document. `passed` receives the
 * verdict and `report` (if non-null) the per-check JSON report.
 *
 * # Safety
 * `json` must be nul-terminated; `passed` writable; `report` null or writable.
 */
enum SpinlabStatus spinlab_verify_certificate(const char *json, bool *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINLAB_H */
