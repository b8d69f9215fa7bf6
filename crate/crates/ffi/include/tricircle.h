#ifndef TRICIRCLE_H
#define TRICIRCLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_VALIDATION = 4,
  TC_STATUS_IO = 5,
  TC_STATUS_DEGENERATE = 6,
  // An inequality verdict failed or an internal invariant broke.
  TC_STATUS_INTERNAL = 7,
} TcStatus;

// Opaque configuration handle.
typedef struct TcConfig TcConfig;

typedef struct TcCountSummary {
  uint64_t triples;
  uint64_t m;
  uint64_t q;
  uint64_t sum_p;
  // 1 when every inequality verdict holds.
  int32_t all_hold;
} TcCountSummary;

typedef struct TcIncidenceSummary {
  uint64_t i_prime;
  uint64_t i;
  uint64_t degenerate;
} TcIncidenceSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Generates a configuration. `kind` is a generator name such as
// `"random-uniform"` or `"golden"`.
//
// # Safety
// `kind` must be a valid C string and `out` a valid pointer.
enum TcStatus tc_config_generate(const char *kind, size_t n, uint64_t seed, struct TcConfig **out);

// Loads a configuration file.
//
// # Safety
// `path` must be a valid C string and `out` a valid pointer.
enum TcStatus tc_config_load(const char *path, struct TcConfig **out);

// # Safety
// `cfg` must come from this library; `path` must be a valid C string.
enum TcStatus tc_config_save(const struct TcConfig *cfg, const char *path);

// Releases a handle; null is ignored.
//
// # Safety
// `cfg` must come from this library and not be used afterwards.
void tc_config_free(struct TcConfig *cfg);

// Writes the three list sizes into `sizes[0..3]`.
//
// # Safety
// `sizes` must point to three writable `size_t`.
enum TcStatus tc_config_sizes(const struct TcConfig *cfg, size_t *sizes);

// Counts unit triples and circles. Returns `Internal` if an inequality
// fails; the summary is written either way.
//
// # Safety
// `cfg` must come from this library; `out` must be valid.
enum TcStatus tc_count(const struct TcConfig *cfg, struct TcCountSummary *out);

// # Safety
// `cfg` must come from this library; `out` must be valid.
enum TcStatus tc_count_incidences(const struct TcConfig *cfg, struct TcIncidenceSummary *out);

// Evaluates the curve of `(t_a, t_b)` at `(t_x, t_y)`; all values are
// rational strings such as `"-3/4"`. The exact value is returned as a new
// string in `out`.
//
// # Safety
// String arguments must be valid C strings; `out` must be valid.
enum TcStatus tc_curve_eval(const struct TcConfig *cfg,
                            const char *t_a,
                            const char *t_b,
                            const char *t_x,
                            const char *t_y,
                            char **out);

// Full count report as JSON. Incidences are included when
// `with_incidences` is nonzero.
//
// # Safety
// `cfg` must come from this library; `out` must be valid.
enum TcStatus tc_report_json(const struct TcConfig *cfg, int32_t with_incidences, char **out);

// Configuration as JSON text.
//
// # Safety
// `cfg` must come from this library; `out` must be valid.
enum TcStatus tc_config_json(const struct TcConfig *cfg, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void tc_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *tc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRICIRCLE_H */
