#ifndef TSRACK_H
#define TSRACK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum TsrKind
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  TSR_KIND_COUNT = 0,
  TSR_KIND_WRITHE = 1,
  TSR_KIND_ADDITIVE = 2,
  TSR_KIND_S_ENH = 3,
};
#ifndef __cplusplus
typedef int32_t TsrKind;
#endif // __cplusplus

enum TsrStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  TSR_STATUS_OK = 0,
  TSR_STATUS_NULL_ARGUMENT = 1,
  TSR_STATUS_INVALID_UTF8 = 2,
  TSR_STATUS_PARSE = 3,
  TSR_STATUS_VALIDATION = 4,
  TSR_STATUS_INTERNAL = 5,
  TSR_STATUS_IO = 6,
  TSR_STATUS_OUT_OF_RANGE = 7,
  TSR_STATUS_PANIC = 8,
};
#ifndef __cplusplus
typedef int32_t TsrStatus;
#endif // __cplusplus

typedef struct TsrLink TsrLink;

typedef struct TsrRack TsrRack;

typedef struct TsrResult TsrResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *tsr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tsr_version(void);

/**
 * Builds a rack from an inline JSON (t,s)-rack spec or a file path.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
TsrStatus tsr_rack_load(const char *source, struct TsrRack **out);

/**
 * Builds a rack from matrix text: `n` followed by `n` rows of 1-based entries.
 *
 * # Safety
 * `matrix` must be a NUL-terminated string; `out` must be writable.
 */
TsrStatus tsr_rack_from_matrix(const char *matrix, struct TsrRack **out);

/**
 * # Safety
 * `rack` must be null or a handle from this library not yet freed.
 */
void tsr_rack_free(struct TsrRack *rack);

/**
 * # Safety
 * `rack` must be a live handle; `out` must be writable.
 */
TsrStatus tsr_rack_size(const struct TsrRack *rack, size_t *out);

/**
 * Order of the kink map.
 *
 * # Safety
 * `rack` must be a live handle; `out` must be writable.
 */
TsrStatus tsr_rack_rank(const struct TsrRack *rack, uint64_t *out);

/**
 * `x ▷ y` on 0-based element indices.
 *
 * # Safety
 * `rack` must be a live handle; `out` must be writable.
 */
TsrStatus tsr_rack_op(const struct TsrRack *rack, size_t x, size_t y, size_t *out);

/**
 * Writes `true` when the two racks are isomorphic. When both carry module
 * structure the certificate is cross-checked against exhaustive search.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
TsrStatus tsr_rack_isomorphic(const struct TsrRack *a, const struct TsrRack *b, bool *out);

/**
 * Parses `pd: ...`, `braid: strands: letters` or `unknots: k`, joined by `;`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
TsrStatus tsr_link_parse(const char *spec, struct TsrLink **out);

/**
 * # Safety
 * `link` must be null or a handle from this library not yet freed.
 */
void tsr_link_free(struct TsrLink *link);

/**
 * # Safety
 * `link` must be a live handle; `out` must be writable.
 */
TsrStatus tsr_link_component_count(const struct TsrLink *link, size_t *out);

/**
 * Computes one invariant; `kind` is one of the `TsrKind` values. The
 * result owns its strings.
 *
 * # Safety
 * `rack` and `link` must be live handles; `out` must be writable.
 */
TsrStatus tsr_invariant(const struct TsrRack *rack,
                        const struct TsrLink *link,
                        int32_t kind,
                        struct TsrResult **out);

/**
 * Polynomial text such as `2u + 2u^2 + 2u^4`. Borrowed from `result`.
 *
 * # Safety
 * `result` must be a live handle.
 */
const char *tsr_result_polynomial(const struct TsrResult *result);

/**
 * The full result record as JSON. Borrowed from `result`.
 *
 * # Safety
 * `result` must be a live handle.
 */
const char *tsr_result_json(const struct TsrResult *result);

/**
 * # Safety
 * `result` must be a live handle.
 */
uint64_t tsr_result_counting_value(const struct TsrResult *result);

/**
 * # Safety
 * `result` must be null or a handle from this library not yet freed.
 */
void tsr_result_free(struct TsrResult *result);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TSRACK_H */
