#ifndef CARTAN_LAB_H
#define CARTAN_LAB_H

/* Generated by cbindgen from cartan-lab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum CartanLabCode {
  CARTAN_LAB_CODE_OK = 0,
  CARTAN_LAB_CODE_NULL_POINTER = 1,
  CARTAN_LAB_CODE_INVALID_UTF8 = 2,
  CARTAN_LAB_CODE_INVALID_JSON = 3,
  CARTAN_LAB_CODE_DOMAIN_ERROR = 4,
  CARTAN_LAB_CODE_INVALID_ARGUMENT = 5,
  CARTAN_LAB_CODE_PANIC = 6,
} CartanLabCode;

/**
 * Opaque ball cover with its budget certificate.
 */
typedef struct CartanLabCover CartanLabCover;

/**
 * Opaque evaluable function.
 */
typedef struct CartanLabFunction CartanLabFunction;

/**
 * Opaque finite atomic measure.
 */
typedef struct CartanLabMeasure CartanLabMeasure;

/**
 * Opaque sampled set with its natural measure.
 */
typedef struct CartanLabSet CartanLabSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static version string; do not free.
 */
const char *cartan_lab_version(void);

/**
 * Copy of the most recent error message on this thread, or NULL when no
 * error has occurred. Free with [`cartan_lab_string_free`].
 */
char *cartan_lab_last_error_message(void);

/**
 * Release a string allocated by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by a `cartan_lab_*` call that
 * allocates a string, not yet freed; NULL is ignored.
 */
void cartan_lab_string_free(char *s);

/**
 * Parse a set from its JSON schema
 * `{dimension_d, depth, diameter, points, weights}`.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum CartanLabCode cartan_lab_set_from_json(const char *json, struct CartanLabSet **out);

/**
 * Build the depth-`depth` middle-thirds sample embedded in C^ambient_n.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum CartanLabCode cartan_lab_set_cantor(uint32_t depth,
                                         size_t ambient_n,
                                         struct CartanLabSet **out);

/**
 * Serialize the set back to its JSON schema. Free the result with
 * [`cartan_lab_string_free`].
 *
 * # Safety
 * `set` must be a live handle from this library.
 */
char *cartan_lab_set_to_json(const struct CartanLabSet *set);

/**
 * Number of sample points.
 *
 * # Safety
 * `set` must be a live handle from this library.
 */
size_t cartan_lab_set_len(const struct CartanLabSet *set);

/**
 * Similarity dimension of the sampled set.
 *
 * # Safety
 * `set` must be a live handle from this library.
 */
double cartan_lab_set_dimension(const struct CartanLabSet *set);

/**
 * Total mass of the natural measure.
 *
 * # Safety
 * `set` must be a live handle from this library.
 */
double cartan_lab_set_total_mass(const struct CartanLabSet *set);

/**
 * Scan regularity ratios at the given scales and certify the two-sided
 * constants onto the handle; the certified values land in `out_a`,
 * `out_b`.
 *
 * # Safety
 * `set` must be a live mutable handle; `scales` must point to `n_scales`
 * doubles; `out_a`/`out_b` may be NULL.
 */
enum CartanLabCode cartan_lab_set_certify(struct CartanLabSet *set,
                                          const double *scales,
                                          size_t n_scales,
                                          double *out_a,
                                          double *out_b);

/**
 * Release a set handle.
 *
 * # Safety
 * `set` must be a live handle from this library or NULL; it must not be
 * used afterwards.
 */
void cartan_lab_set_free(struct CartanLabSet *set);

/**
 * Parse a function from its tagged JSON schema (`potential`, `logpoly`,
 * `lognormmap`, `constant`, `max`, `shifted`, `scaled`).
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum CartanLabCode cartan_lab_function_from_json(const char *json, struct CartanLabFunction **out);

/**
 * Evaluate at a point given as `len` real coordinates (2n for C^n).
 * `-inf` is a legitimate result at a logarithmic pole.
 *
 * # Safety
 * `f` must be a live handle; `coords` must point to `len` doubles; `out`
 * must be writable.
 */
enum CartanLabCode cartan_lab_function_evaluate(const struct CartanLabFunction *f,
                                                const double *coords,
                                                size_t len,
                                                double *out);

/**
 * Boundary-sampled supremum over the closed ball.
 *
 * # Safety
 * `f` must be a live handle; `center` must point to `len` doubles; `out`
 * must be writable.
 */
enum CartanLabCode cartan_lab_function_sup_on_ball(const struct CartanLabFunction *f,
                                                   const double *center,
                                                   size_t len,
                                                   double radius,
                                                   size_t resolution,
                                                   double *out);

/**
 * Release a function handle.
 *
 * # Safety
 * `f` must be a live handle from this library or NULL; it must not be
 * used afterwards.
 */
void cartan_lab_function_free(struct CartanLabFunction *f);

/**
 * Parse a measure from `{atoms: [[...]], masses: [...]}`.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum CartanLabCode cartan_lab_measure_from_json(const char *json, struct CartanLabMeasure **out);

/**
 * Critical radius `tau` of a point for the power gauge `(p t)^d`.
 *
 * # Safety
 * `mu` must be a live handle; `coords` must point to `len` doubles; `out`
 * must be writable.
 */
enum CartanLabCode cartan_lab_measure_tau(const struct CartanLabMeasure *mu,
                                          const double *coords,
                                          size_t len,
                                          double p,
                                          double d,
                                          double *out);

/**
 * Release a measure handle.
 *
 * # Safety
 * `mu` must be a live handle from this library or NULL; it must not be
 * used afterwards.
 */
void cartan_lab_measure_free(struct CartanLabMeasure *mu);

/**
 * Exceptional cover with radius budget `(2H)^d / d`, off which the
 * potential of the measure stays above `mass * log(H/e)`.
 *
 * # Safety
 * `mu` must be a live handle and `out` writable storage for one pointer.
 */
enum CartanLabCode cartan_lab_cartan_cover(const struct CartanLabMeasure *mu,
                                           double h,
                                           double d,
                                           struct CartanLabCover **out);

/**
 * Greedy cover for an explicit power gauge and parameter triple.
 *
 * # Safety
 * `mu` must be a live handle and `out` writable storage for one pointer.
 */
enum CartanLabCode cartan_lab_gorin_cover(const struct CartanLabMeasure *mu,
                                          double p,
                                          double d,
                                          double alpha,
                                          double beta,
                                          double gamma,
                                          struct CartanLabCover **out);

/**
 * Number of balls in the cover.
 *
 * # Safety
 * `cover` must be a live handle from this library.
 */
size_t cartan_lab_cover_ball_count(const struct CartanLabCover *cover);

/**
 * Spent radius-power budget `sum r_j^d`.
 *
 * # Safety
 * `cover` must be a live handle from this library.
 */
double cartan_lab_cover_budget_used(const struct CartanLabCover *cover);

/**
 * Certified budget limit.
 *
 * # Safety
 * `cover` must be a live handle from this library.
 */
double cartan_lab_cover_budget_limit(const struct CartanLabCover *cover);

/**
 * 1 when the point lies inside some cover ball, else 0.
 *
 * # Safety
 * `cover` must be a live handle; `coords` must point to `len` doubles.
 */
int32_t cartan_lab_cover_contains(const struct CartanLabCover *cover,
                                  const double *coords,
                                  size_t len);

/**
 * Serialize the cover as `{balls, d_exponent, budget_used, budget_limit}`.
 * Free the result with [`cartan_lab_string_free`].
 *
 * # Safety
 * `cover` must be a live handle from this library.
 */
char *cartan_lab_cover_to_json(const struct CartanLabCover *cover);

/**
 * Release a cover handle.
 *
 * # Safety
 * `cover` must be a live handle from this library or NULL; it must not be
 * used afterwards.
 */
void cartan_lab_cover_free(struct CartanLabCover *cover);

/**
 * Solve `sum ratio_i^d = 1` for the similarity dimension.
 *
 * # Safety
 * `ratios` must point to `len` doubles and `out` must be writable.
 */
enum CartanLabCode cartan_lab_moran_dimension(const double *ratios, size_t len, double *out);

/**
 * Evaluate the function at every lattice point of
 * `[xmin,xmax] x [ymin,ymax]` outside the cover and compare against the
 * bound. Returns the verification report as JSON in `out_report`; free it
 * with [`cartan_lab_string_free`].
 *
 * # Safety
 * `f` and `cover` must be live handles; `out_report` must be writable
 * storage for one pointer.
 */
enum CartanLabCode cartan_lab_verify_cartan(const struct CartanLabFunction *f,
                                            const struct CartanLabCover *cover,
                                            double bound,
                                            double xmin,
                                            double xmax,
                                            double ymin,
                                            double ymax,
                                            size_t n,
                                            char **out_report);

/**
 * Largest mean oscillation of the function over the set's dyadic ball
 * family.
 *
 * # Safety
 * `f` and `set` must be live handles; `out` must be writable.
 */
enum CartanLabCode cartan_lab_bmo_norm(const struct CartanLabFunction *f,
                                       const struct CartanLabSet *set,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARTAN_LAB_H */
