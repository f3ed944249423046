#ifndef KNOTSUM_H
#define KNOTSUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Mirrors the CLI exit codes for 0, 1 and 2.
 */
typedef enum KsStatus {
  KS_STATUS_OK = 0,
  /**
   * Residuals, remainders or colorings out of tolerance.
   */
  KS_STATUS_MATH_FAILURE = 1,
  /**
   * Malformed or inconsistent input.
   */
  KS_STATUS_INPUT_ERROR = 2,
  KS_STATUS_NULL_POINTER = 3,
  KS_STATUS_PANIC = 4,
} KsStatus;

/**
 * A coloring document, exact over `Q(x)` or floating.
 */
typedef struct KsColoring KsColoring;

/**
 * An oriented knot diagram.
 */
typedef struct KsDiagram KsDiagram;

/**
 * Complex volume `vol + i cs` and the solution check behind it.
 */
typedef struct KsVolume {
  double vol;
  double cs;
  double w0_re;
  double w0_im;
  double max_residual;
  bool residual_ok;
} KsVolume;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or NULL after a
 * successful call. Valid until the next call on the same thread.
 */
const char *ks_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void ks_string_free(char *s);

/**
 * Parse a PD code such as `X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)`.
 *
 * # Safety
 * `pd` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KsStatus ks_diagram_from_pd(const char *pd, struct KsDiagram **out);

/**
 * Diagram JSON, as produced by [`ks_diagram_to_json`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KsStatus ks_diagram_from_json(const char *json, struct KsDiagram **out);

/**
 * Built-in diagram `3_1`, `4_1` or `3_1#4_1`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KsStatus ks_diagram_builtin(const char *name, struct KsDiagram **out);

/**
 * # Safety
 * `d` must be NULL or a live diagram handle; `out` a valid pointer.
 */
enum KsStatus ks_diagram_to_json(const struct KsDiagram *d, char **out);

/**
 * Wirtinger presentation as JSON: generators and relator words.
 *
 * # Safety
 * `d` must be NULL or a live diagram handle; `out` a valid pointer.
 */
enum KsStatus ks_diagram_wirtinger(const struct KsDiagram *d, char **out);

/**
 * Crossing, arc and face counts; any output pointer may be NULL.
 *
 * # Safety
 * `d` must be NULL or a live diagram handle; non-NULL outputs valid.
 */
enum KsStatus ks_diagram_counts(const struct KsDiagram *d,
                                size_t *crossings,
                                size_t *arcs,
                                size_t *faces);

/**
 * # Safety
 * `d` must be NULL or a handle from this library, freed once.
 */
void ks_diagram_free(struct KsDiagram *d);

/**
 * Exact shadow coloring of a built-in fixture; the composite carries its
 * splice record.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KsStatus ks_coloring_builtin(const char *name, struct KsColoring **out);

/**
 * Coloring JSON; exact or floating is detected from the encoding.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KsStatus ks_coloring_from_json(const char *json, struct KsColoring **out);

/**
 * # Safety
 * `c` must be NULL or a live coloring handle; `out` a valid pointer.
 */
enum KsStatus ks_coloring_to_json(const struct KsColoring *c, char **out);

/**
 * # Safety
 * `c` must be NULL or a live coloring handle; `out` a valid pointer.
 */
enum KsStatus ks_coloring_is_exact(const struct KsColoring *c, bool *out);

/**
 * Floating copy of a coloring. Exact colorings are evaluated at `x_root`
 * (`-1` or `1`; `0` uses the document's root, defaulting to `-1`).
 *
 * # Safety
 * `c` must be NULL or a live coloring handle; `out` a valid pointer.
 */
enum KsStatus ks_coloring_to_floating(const struct KsColoring *c,
                                      int32_t x_root,
                                      struct KsColoring **out);

/**
 * Whether the arc relation holds at every crossing within `tol`
 * (exactly, for exact colorings).
 *
 * # Safety
 * `c` must be NULL or a live coloring handle; `passed` a valid pointer.
 */
enum KsStatus ks_coloring_verify(const struct KsColoring *c, double tol, bool *passed);

/**
 * # Safety
 * `c` must be NULL or a handle from this library, freed once.
 */
void ks_coloring_free(struct KsColoring *c);

/**
 * Complex volume of a shadow coloring (region colors and `p` required).
 * Exact colorings are evaluated at `x_root` as in
 * [`ks_coloring_to_floating`]. Returns `KS_STATUS_MATH_FAILURE` when the
 * residual check fails; `out` is filled either way.
 *
 * # Safety
 * `c` must be NULL or a live coloring handle; `out` a valid pointer.
 */
enum KsStatus ks_complex_volume(const struct KsColoring *c,
                                int32_t x_root,
                                double tol,
                                struct KsVolume *out);

/**
 * Twisted Alexander polynomial as JSON, with the layout of the CLI's
 * `alexander` output. A negative `column` selects the default.
 *
 * # Safety
 * `c` must be NULL or a live coloring handle; `out` a valid pointer.
 */
enum KsStatus ks_twisted_alexander(const struct KsColoring *c,
                                   int64_t column,
                                   double tol,
                                   char **out);

/**
 * Connected sum of two colorings of the same kind, cutting `arc1` of `a`
 * and `arc2` of `b`. `conjugator` is NULL or `"canonical"` for the
 * canonical conjugator, otherwise a 2×2 JSON matrix.
 *
 * # Safety
 * `a`, `b` must be NULL or live coloring handles; `conjugator` NULL or a
 * NUL-terminated string; `out` a valid pointer.
 */
enum KsStatus ks_connected_sum(const struct KsColoring *a,
                               size_t arc1,
                               const struct KsColoring *b,
                               size_t arc2,
                               const char *conjugator,
                               double tol,
                               struct KsColoring **out);

/**
 * Split a connected-sum coloring carrying a splice record into its two
 * summands.
 *
 * # Safety
 * `c` must be NULL or a live coloring handle; outputs valid pointers.
 */
enum KsStatus ks_factor(const struct KsColoring *c,
                        double tol,
                        struct KsColoring **left,
                        struct KsColoring **right);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTSUM_H */
