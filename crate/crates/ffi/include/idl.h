/* Generated by cbindgen from crates/ffi. Do not edit. */

#ifndef IDL_H
#define IDL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IdlStatus {
  IDL_STATUS_OK = 0,
  IDL_STATUS_NULL_POINTER = 1,
  IDL_STATUS_INVALID_UTF8 = 2,
  IDL_STATUS_PARSE = 3,
  IDL_STATUS_INVALID_MAP = 4,
  IDL_STATUS_DOMAIN = 5,
  IDL_STATUS_PRECONDITION = 6,
  IDL_STATUS_BUDGET = 7,
  IDL_STATUS_NOT_FOUND = 8,
  IDL_STATUS_PANIC = 9,
} IdlStatus;

/**
 * Opaque handle to a continuous piecewise-linear self-map.
 */
typedef struct IdlMap IdlMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *idl_last_error_message(void);

/**
 * Parses a map file (`{"domain": [...], "nodes": [...]}`).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a writable pointer.
 */
enum IdlStatus idl_map_from_json(const char *json, struct IdlMap **out);

/**
 * The tent map on `[0, 1]`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum IdlStatus idl_map_tent(struct IdlMap **out);

/**
 * # Safety
 * `map` must be null or a handle returned by this library, not yet freed.
 */
void idl_map_free(struct IdlMap *map);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void idl_string_free(char *s);

/**
 * # Safety
 * `map` must be a live handle and `out` a writable pointer.
 */
enum IdlStatus idl_map_to_json(const struct IdlMap *map, char **out);

/**
 * Evaluates the map at a canonical rational such as `"2/7"`.
 *
 * # Safety
 * `map` must be a live handle, `x` a NUL-terminated string and `out` a
 * writable pointer.
 */
enum IdlStatus idl_map_eval(const struct IdlMap *map, const char *x, char **out);

/**
 * Least periods up to `bound` and the tail verdict, as
 * `{"periods": [...], "is_tail": bool, "peak_laps": n}`. A zero budget
 * selects the default.
 *
 * # Safety
 * `map` must be a live handle and `out` a writable pointer.
 */
enum IdlStatus idl_analyze(const struct IdlMap *map, uint64_t bound, size_t budget, char **out);

/**
 * All orbits of least period `period`, as a JSON array of
 * `{"points": [...], "successor": [...]}`.
 *
 * # Safety
 * `map` must be a live handle and `out` a writable pointer.
 */
enum IdlStatus idl_enumerate_orbits(const struct IdlMap *map,
                                    uint64_t period,
                                    size_t budget,
                                    char **out);

/**
 * The truncated tent map `T_n`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum IdlStatus idl_build_tn(uint64_t n, size_t budget, struct IdlMap **out);

/**
 * The depth-`depth` approximant of `T_∞`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum IdlStatus idl_build_tinf(uint32_t depth, size_t budget, struct IdlMap **out);

/**
 * Whether `m` precedes `n` in the Sharkovsky order.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum IdlStatus idl_precedes(uint64_t m, uint64_t n, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDL_H */
