#ifndef ISAC_REGION_H
#define ISAC_REGION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsacSegmentKind {
  ISAC_SEGMENT_KIND_FREE_COMMUNICATION = 0,
  ISAC_SEGMENT_KIND_TRADEOFF = 1,
  ISAC_SEGMENT_KIND_FREE_SENSING = 2,
} IsacSegmentKind;

typedef enum IsacStatus {
  ISAC_STATUS_OK = 0,
  ISAC_STATUS_NULL_POINTER = 1,
  ISAC_STATUS_INVALID_UTF8 = 2,
  ISAC_STATUS_PARSE_ERROR = 3,
  ISAC_STATUS_VALIDATION_ERROR = 4,
  ISAC_STATUS_OUT_OF_RANGE = 5,
  ISAC_STATUS_SOLVER_ERROR = 6,
  ISAC_STATUS_INTERNAL_ERROR = 7,
  ISAC_STATUS_INDEX_OUT_OF_BOUNDS = 8,
  ISAC_STATUS_INVALID_ARGUMENT = 9,
} IsacStatus;

/**
 * Opaque validated network.
 */
typedef struct IsacNetwork IsacNetwork;

/**
 * Opaque traced region boundary.
 */
typedef struct IsacRegion IsacRegion;

/**
 * One edge of a traced boundary. `k` is 0 when no integer gradient was
 * matched.
 */
typedef struct IsacSegment {
  size_t start;
  size_t end;
  enum IsacSegmentKind kind;
  /**
   * `ds/df`; `-inf` on a free-sensing edge.
   */
  double ds_df;
  uint32_t k;
} IsacSegment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *isac_last_error_message(void);

/**
 * Static, NUL-terminated name of a status code.
 */
const char *isac_status_name(enum IsacStatus status);

/**
 * Parses and validates a network from NUL-terminated JSON text.
 *
 * # Safety
 * `json` must be a valid C string and `out` a writable pointer.
 */
enum IsacStatus isac_network_from_json(const char *json, struct IsacNetwork **out);

/**
 * Releases a network. Null is ignored.
 *
 * # Safety
 * `net` must come from [`isac_network_from_json`] and not be used again.
 */
void isac_network_free(struct IsacNetwork *net);

/**
 * `s*`, the largest sensing fidelity.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_max_sensing(const struct IsacNetwork *net, double *out);

/**
 * `f*`, the largest throughput.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_max_throughput(const struct IsacNetwork *net, double *out);

/**
 * Largest throughput at sensing fidelity `target`, which must lie in
 * `[0, s*]`.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_max_throughput_at_sensing(const struct IsacNetwork *net,
                                               double target,
                                               double *out);

/**
 * `f~`, the largest throughput at maximum sensing.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_free_communication(const struct IsacNetwork *net, double *out);

/**
 * Whether a positive-capacity source-to-sink path avoids the sensing
 * links.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_has_avoiding_path(const struct IsacNetwork *net, bool *out);

/**
 * Approximates `s~` by bisection to within `delta`; `lp_calls` may be null.
 *
 * # Safety
 * `net` must be a live handle, `out` writable and `lp_calls` null or
 * writable.
 */
enum IsacStatus isac_approx_free_sensing(const struct IsacNetwork *net,
                                         double delta,
                                         double *out,
                                         uint32_t *lp_calls);

/**
 * Traces the region boundary. Non-positive `slope_tol` and `min_interval`
 * select the defaults.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum IsacStatus isac_trace_region(const struct IsacNetwork *net,
                                  double slope_tol,
                                  double min_interval,
                                  struct IsacRegion **out);

/**
 * Releases a region. Null is ignored.
 *
 * # Safety
 * `region` must come from [`isac_trace_region`] and not be used again.
 */
void isac_region_free(struct IsacRegion *region);

/**
 * Number of breakpoints, ordered by increasing throughput.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum IsacStatus isac_region_breakpoint_count(const struct IsacRegion *r, size_t *out);

/**
 * Breakpoint `index` as `(sensing, throughput)`.
 *
 * # Safety
 * `r` must be a live handle and both outputs writable.
 */
enum IsacStatus isac_region_breakpoint(const struct IsacRegion *r,
                                       size_t index,
                                       double *sensing,
                                       double *throughput);

/**
 * Number of boundary segments.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum IsacStatus isac_region_segment_count(const struct IsacRegion *r, size_t *out);

/**
 * Segment `index`.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum IsacStatus isac_region_segment(const struct IsacRegion *r,
                                    size_t index,
                                    struct IsacSegment *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISAC_REGION_H */
