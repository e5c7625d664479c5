#ifndef SMMS_COMPARE_H
#define SMMS_COMPARE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of one check.
 */
typedef enum SmmsCheckStatus {
  SMMS_CHECK_STATUS_SATISFIED = 0,
  SMMS_CHECK_STATUS_VIOLATED = 1,
  SMMS_CHECK_STATUS_SKIPPED = 2,
  SMMS_CHECK_STATUS_FAILED = 3,
} SmmsCheckStatus;

/**
 * Output format for [`smms_reports_render`].
 */
typedef enum SmmsFormat {
  SMMS_FORMAT_CSV = 0,
  SMMS_FORMAT_STRUCTURED = 1,
} SmmsFormat;

/**
 * Result codes.
 */
typedef enum SmmsStatus {
  SMMS_STATUS_OK = 0,
  SMMS_STATUS_NULL_POINTER = 1,
  SMMS_STATUS_INVALID_UTF8 = 2,
  /**
   * Parameters outside the admissible range of a routine.
   */
  SMMS_STATUS_PARAMETER = 3,
  /**
   * Radius outside the domain or the comparison range.
   */
  SMMS_STATUS_RANGE = 4,
  /**
   * The space definition is malformed or fails its invariants.
   */
  SMMS_STATUS_SCENARIO = 5,
  /**
   * Quadrature, root finding or an ODE solve failed.
   */
  SMMS_STATUS_NUMERICAL = 6,
  SMMS_STATUS_UNKNOWN_THEOREM = 7,
  SMMS_STATUS_INDEX_OUT_OF_BOUNDS = 8,
  SMMS_STATUS_NOT_FOUND = 9,
  /**
   * The output buffer is too small; the required size was written.
   */
  SMMS_STATUS_BUFFER_TOO_SMALL = 10,
  SMMS_STATUS_PANIC = 11,
} SmmsStatus;

/**
 * Reports produced by one [`smms_check`] call.
 */
typedef struct SmmsReports SmmsReports;

/**
 * A rotationally symmetric weighted space.
 */
typedef struct SmmsSpace SmmsSpace;

/**
 * Check parameters; NaN marks an unset value.
 */
typedef struct SmmsCheckParams {
  double p;
  double h;
  double a;
  double r;
  double big_r;
  double m;
  double k;
  double alpha;
  double delta;
  double r1;
  double r2;
  double big_r1;
  double big_r2;
  /**
   * Radii for the growth check; may be null when `r_list_len` is 0.
   */
  const double *r_list;
  size_t r_list_len;
} SmmsCheckParams;

/**
 * Numbers of one report.
 */
typedef struct SmmsReportSummary {
  double lhs;
  double rhs;
  double margin;
  double check_tol;
  bool satisfied;
  enum SmmsCheckStatus status;
} SmmsReportSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf`.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes or null; `needed` may be null.
 */
enum SmmsStatus smms_last_error(char *buf, size_t cap, size_t *needed);

/**
 * Build a space from warp and weight expressions in `r`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum SmmsStatus smms_space_new(const char *name,
                               uint32_t dimension,
                               const char *warp,
                               const char *weight,
                               double r_max,
                               struct SmmsSpace **out_space);

/**
 * Build a space from a catalog spec (`gaussian:c=1`), a scenario file
 * path or an inline scenario object.
 *
 * # Safety
 * `spec` must be NUL-terminated; `out` must be writable.
 */
enum SmmsStatus smms_space_resolve(const char *spec,
                                   uint32_t default_dimension,
                                   struct SmmsSpace **out_space);

/**
 * # Safety
 * `space` must come from this library and not be used afterwards.
 */
void smms_space_free(struct SmmsSpace *space);

/**
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_space_dimension(const struct SmmsSpace *space, uint32_t *out_n);

/**
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_space_r_max(const struct SmmsSpace *space, double *out_r);

/**
 * Weighted area `A_f(r)` of the geodesic sphere.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_sphere_area(const struct SmmsSpace *space, double r, double *out_area);

/**
 * Weighted volume `V_f(R)` of the pole ball.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_ball_volume(const struct SmmsSpace *space, double big_r, double *out_volume);

/**
 * Curvature excess `((n−1)H − λ_min(Ric_f))_+` at radius `r`.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_curvature_excess(const struct SmmsSpace *space,
                                      double h,
                                      double r,
                                      double *out_excess);

/**
 * Mean curvature error `(m_f − m_H − a)_+` at radius `r`.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_mean_curvature_error(const struct SmmsSpace *space,
                                          double h,
                                          double a,
                                          double r,
                                          double *out_error);

/**
 * Parameters with every field unset.
 */
struct SmmsCheckParams smms_check_params_default(void);

/**
 * Run one theorem family (`mc_I`, `vol_I`, ...) with default tolerances.
 *
 * # Safety
 * `space` must be a live handle, `theorem` NUL-terminated, `params`
 * readable and `out` writable.
 */
enum SmmsStatus smms_check(const struct SmmsSpace *space,
                           const char *theorem,
                           const struct SmmsCheckParams *params,
                           struct SmmsReports **out_reports);

/**
 * # Safety
 * `reports` must come from this library and not be used afterwards.
 */
void smms_reports_free(struct SmmsReports *reports);

/**
 * # Safety
 * `reports` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_reports_len(const struct SmmsReports *reports, size_t *out_len);

/**
 * # Safety
 * `reports` must be a live handle; `out` must be writable.
 */
enum SmmsStatus smms_reports_get(const struct SmmsReports *reports,
                                 size_t index,
                                 struct SmmsReportSummary *out_summary);

/**
 * Copy the theorem id of a report into `buf`.
 *
 * # Safety
 * `reports` must be a live handle; `buf` valid for `cap` bytes or null.
 */
enum SmmsStatus smms_reports_theorem_id(const struct SmmsReports *reports,
                                        size_t index,
                                        char *buf,
                                        size_t cap,
                                        size_t *needed);

/**
 * Look up a named diagnostic of a report.
 *
 * # Safety
 * `reports` must be a live handle, `name` NUL-terminated, `out` writable.
 */
enum SmmsStatus smms_reports_diagnostic(const struct SmmsReports *reports,
                                        size_t index,
                                        const char *name,
                                        double *out_value);

/**
 * Render all reports as CSV or JSON into `buf`.
 *
 * # Safety
 * `reports` must be a live handle; `buf` valid for `cap` bytes or null.
 */
enum SmmsStatus smms_reports_render(const struct SmmsReports *reports,
                                    enum SmmsFormat format,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SMMS_COMPARE_H */
