#ifndef TROPLIFT_H
#define TROPLIFT_H

#include <stdint.h>
#include <stddef.h>

/**
 * Status codes; the first four match the exit codes of the command line tool.
 */
typedef enum TlStatus {
  TL_STATUS_OK = 0,
  TL_STATUS_VERIFICATION_FAILED = 1,
  TL_STATUS_INPUT_ERROR = 2,
  TL_STATUS_NUMERIC_ERROR = 3,
  TL_STATUS_NULL_ARGUMENT = 4,
  TL_STATUS_INTERNAL = 5,
} TlStatus;

/**
 * Opaque plane tropical curve.
 */
typedef struct TlCurve TlCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; valid until the next call.
 */
const char *tl_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void tl_string_free(char *s);

/**
 * Parses an explicit curve or a lifted lattice polygon.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TlStatus tl_curve_from_json(const char *json, struct TlCurve **out);

/**
 * # Safety
 * `c` must come from `tl_curve_from_json` or be null.
 */
void tl_curve_free(struct TlCurve *c);

/**
 * Curve JSON with balancing, smoothness, PL topology and exactness data.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum TlStatus tl_curve_report(const struct TlCurve *c, char **out);

/**
 * Meshes the smooth lift at scale `t` and reports its residual and distance to the PL lift.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
enum TlStatus tl_lift_summary(const struct TlCurve *c, double t, uint32_t resolution, char **out);

/**
 * Boundary, topology and monotonicity report for `{"curve": .., "polygon": ..}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TlStatus tl_toric_report(const char *json, char **out);

/**
 * Runs one verification suite; VERIFICATION_FAILED when it ran but did not pass.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TlStatus tl_verify(const char *suite, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPLIFT_H */
