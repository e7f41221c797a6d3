#ifndef IGUSA_H
#define IGUSA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum IgusaStatus {
  IGUSA_STATUS_OK = 0,
  IGUSA_STATUS_NULL_POINTER = 1,
  IGUSA_STATUS_INVALID_UTF8 = 2,
  // The polynomial text could not be parsed or is not admissible.
  IGUSA_STATUS_PARSE_ERROR = 3,
  // Bad prime, character, mode or configuration JSON.
  IGUSA_STATUS_CONFIG_ERROR = 4,
  // An enumeration or recursion cap was exceeded.
  IGUSA_STATUS_CAP_EXCEEDED = 5,
  // The engine or analysis could not handle the input.
  IGUSA_STATUS_ENGINE_ERROR = 6,
  // An internal panic was caught at the boundary.
  IGUSA_STATUS_PANIC = 7,
} IgusaStatus;

// Opaque parsed polynomial together with its variable order.
typedef struct IgusaPolynomial IgusaPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `text` into a polynomial handle. `vars` is a comma-separated variable
// order, or NULL to infer it from the text.
//
// # Safety
// `text` and (if non-null) `vars` must be valid NUL-terminated strings;
// `out` must be a valid pointer.
enum IgusaStatus igusa_polynomial_parse(const char *text,
                                        const char *vars,
                                        struct IgusaPolynomial **out);

// Releases a handle from [`igusa_polynomial_parse`]. NULL is ignored.
//
// # Safety
// `poly` must come from [`igusa_polynomial_parse`] and not be freed twice.
void igusa_polynomial_free(struct IgusaPolynomial *poly);

// Number of variables, or 0 for a NULL handle.
//
// # Safety
// `poly` must be NULL or a live handle.
size_t igusa_polynomial_nvars(const struct IgusaPolynomial *poly);

// Z(s, f, χ) for the character of the given order and conductor (1, 1 for
// trivial) as JSON `{"num": [[k, c], …], "den": [[N, M, mult], …]}`.
//
// # Safety
// `poly` must be a live handle and `out` a valid pointer.
enum IgusaStatus igusa_zeta_json(const struct IgusaPolynomial *poly,
                                 uint64_t p,
                                 uint32_t char_order,
                                 uint32_t char_conductor,
                                 char **out);

// The Newton polyhedron of `poly` as JSON.
//
// # Safety
// `poly` must be a live handle and `out` a valid pointer.
enum IgusaStatus igusa_newton_json(const struct IgusaPolynomial *poly, char **out);

// Oracle series coefficients k = 0..kmax-1 of Z as a JSON array.
//
// # Safety
// `poly` must be a live handle and `out` a valid pointer.
enum IgusaStatus igusa_oracle_json(const struct IgusaPolynomial *poly,
                                   uint64_t p,
                                   uint32_t char_order,
                                   uint32_t char_conductor,
                                   uint32_t kmax,
                                   uint64_t enum_cap,
                                   char **out);

// Full report for a JSON run configuration, e.g. `{"poly": "x*y", "p": 3}`.
// `*failed_checks` (if non-null) receives the number of failed checks.
//
// # Safety
// `config_json` must be a valid string, `out` a valid pointer and
// `failed_checks` NULL or valid.
enum IgusaStatus igusa_report_json(const char *config_json, char **out, uint32_t *failed_checks);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void igusa_string_free(char *s);

// Message of the last failed call on this thread ("" after a success).
// Valid until the next call into the library on the same thread.
const char *igusa_last_error(void);

// Library version as a static string.
const char *igusa_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IGUSA_H */
