#ifndef SUPERCHARACTER_H
#define SUPERCHARACTER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SctStatus {
  SCT_STATUS_OK = 0,
  SCT_STATUS_NULL_POINTER = 1,
  SCT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, value expression or partition text.
   */
  SCT_STATUS_PARSE = 3,
  /**
   * The table failed validation or is structurally unusable.
   */
  SCT_STATUS_INVALID_TABLE = 4,
  SCT_STATUS_OUT_OF_RANGE = 5,
  SCT_STATUS_TOO_LARGE = 6,
  SCT_STATUS_PANIC = 7,
} SctStatus;

/**
 * The supercharacter theories of a table, sorted.
 */
typedef struct SctEnumeration SctEnumeration;

/**
 * A parsed character table.
 */
typedef struct SctTable SctTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into the library on the same thread.
 */
const char *sct_last_error(void);

/**
 * Parses a table from its JSON text and validates it.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SctStatus sct_table_from_json(const char *json, struct SctTable **out);

/**
 * # Safety
 * `t` must come from [`sct_table_from_json`] and not be freed already; null is ignored.
 */
void sct_table_free(struct SctTable *t);

/**
 * Number of classes (and irreducible characters); 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live table handle.
 */
size_t sct_table_k(const struct SctTable *t);

/**
 * Order of the table automorphism group.
 *
 * # Safety
 * `t` must be a live table handle and `out` writable.
 */
enum SctStatus sct_automorphism_count(const struct SctTable *t, size_t *out);

/**
 * Enumerates every supercharacter theory. `workers` = 0 uses all cores.
 *
 * # Safety
 * `t` must be a live table handle and `out` writable.
 */
enum SctStatus sct_enumerate(const struct SctTable *t,
                             size_t workers,
                             bool use_auts,
                             struct SctEnumeration **out);

/**
 * # Safety
 * `e` must be null or a live enumeration handle.
 */
size_t sct_enumeration_count(const struct SctEnumeration *e);

/**
 * Theory `index` as `{"chars":[[..]],"classes":[[..]]}`; free with [`sct_string_free`].
 *
 * # Safety
 * `e` must be a live enumeration handle and `out` writable.
 */
enum SctStatus sct_enumeration_theory_json(const struct SctEnumeration *e,
                                           size_t index,
                                           char **out);

/**
 * # Safety
 * `e` must come from [`sct_enumerate`] and not be freed already; null is ignored.
 */
void sct_enumeration_free(struct SctEnumeration *e);

/**
 * Tests whether the union of `len` classes is a superclass of some theory.
 * When it is and `theory_json` is not null, the coarsest such theory is
 * written there as JSON; otherwise it is set to null.
 *
 * # Safety
 * `classes` must point to `len` readable indices; `found` must be writable;
 * `theory_json` may be null.
 */
enum SctStatus sct_superclass(const struct SctTable *t,
                              const size_t *classes,
                              size_t len,
                              bool *found,
                              char **theory_json);

/**
 * Coarsest theory whose class partition refines `partition` (e.g. `"[[0],[1,2],[3]]"`).
 *
 * # Safety
 * `partition` must be a NUL-terminated string and `out` writable.
 */
enum SctStatus sct_refine_classes(const struct SctTable *t, const char *partition, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void sct_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERCHARACTER_H */
