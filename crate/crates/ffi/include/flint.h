#ifndef FLINT_H
#define FLINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FlintFlavor {
  FLINT_FLAVOR_FLOAT = 0,
  FLINT_FLAVOR_FLINT = 1,
} FlintFlavor;

typedef enum FlintStatus {
  FLINT_STATUS_OK = 0,
  FLINT_STATUS_NULL_POINTER = 1,
  FLINT_STATUS_INVALID_ARGUMENT = 2,
  FLINT_STATUS_NOT_FOUND = 3,
  FLINT_STATUS_IO = 4,
  FLINT_STATUS_INVALID_MODEL = 5,
  FLINT_STATUS_WIDTH_MISMATCH = 6,
  FLINT_STATUS_PANIC = 7,
} FlintStatus;

typedef enum FlintStrategy {
  FLINT_STRATEGY_FLOAT = 0,
  FLINT_STRATEGY_FLINT = 1,
} FlintStrategy;

/**
 * A loaded, validated forest.
 */
typedef struct FlintForest FlintForest;

/**
 * A forest flattened for one comparison strategy.
 */
typedef struct FlintPrepared FlintPrepared;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or "" after a
 * success. Valid until the next flint call on the same thread.
 */
const char *flint_last_error(void);

const char *flint_version(void);

/**
 * Loads and validates a model JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FlintStatus flint_forest_load(const char *path, struct FlintForest **out);

/**
 * Parses and validates a model from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FlintStatus flint_forest_from_json(const char *json, struct FlintForest **out);

/**
 * # Safety
 * `forest` must come from a flint loader and not be freed twice. Null is
 * ignored.
 */
void flint_forest_free(struct FlintForest *forest);

/**
 * 32 or 64, or 0 for a null handle.
 *
 * # Safety
 * `forest` must be null or a live handle.
 */
uint32_t flint_forest_width_bits(const struct FlintForest *forest);

/**
 * # Safety
 * `forest` must be null or a live handle.
 */
size_t flint_forest_n_features(const struct FlintForest *forest);

/**
 * # Safety
 * `forest` must be null or a live handle.
 */
size_t flint_forest_n_classes(const struct FlintForest *forest);

/**
 * # Safety
 * `forest` must be null or a live handle.
 */
size_t flint_forest_n_trees(const struct FlintForest *forest);

/**
 * Flattens a forest for inference. The forest may be freed afterwards.
 *
 * # Safety
 * `forest` must be a live handle; `out` must be writable.
 */
enum FlintStatus flint_prepare(const struct FlintForest *forest,
                               enum FlintStrategy strategy,
                               struct FlintPrepared **out);

/**
 * # Safety
 * `prepared` must come from [`flint_prepare`] and not be freed twice.
 */
void flint_prepared_free(struct FlintPrepared *prepared);

/**
 * Classifies `n_rows` row-major f32 rows of `n_features` values each.
 * Writes one class per row to `classes_out` and, when `scores_out` is
 * not null, `n_rows * n_classes` summed scores.
 *
 * # Safety
 * Buffers must hold the stated number of elements.
 */
enum FlintStatus flint_predict_f32(const struct FlintPrepared *prepared,
                                   const float *rows,
                                   size_t n_rows,
                                   size_t n_features,
                                   uint32_t *classes_out,
                                   double *scores_out);

/**
 * f64 counterpart of [`flint_predict_f32`].
 *
 * # Safety
 * Buffers must hold the stated number of elements.
 */
enum FlintStatus flint_predict_f64(const struct FlintPrepared *prepared,
                                   const double *rows,
                                   size_t n_rows,
                                   size_t n_features,
                                   uint32_t *classes_out,
                                   double *scores_out);

/**
 * Encodes a split so that `feature <= split` becomes `bits <= constant`,
 * or `constant <= (bits ^ sign_mask)` when `negative_case` is set.
 *
 * # Safety
 * Output pointers must be writable.
 */
enum FlintStatus flint_encode_split_f32(float split, int32_t *constant, bool *negative_case);

/**
 * # Safety
 * Output pointers must be writable.
 */
enum FlintStatus flint_encode_split_f64(double split, int64_t *constant, bool *negative_case);

/**
 * `x >= y` for the floats whose bit patterns are `x` and `y`, with
 * -0 ordered below +0.
 */
bool flint_ge_i32(int32_t x, int32_t y);

bool flint_ge_i64(int64_t x, int64_t y);

/**
 * Emits C source for the forest (or its harness main when `harness` is
 * set). Release the string with [`flint_string_free`].
 *
 * # Safety
 * `forest` must be a live handle; `out` must be writable.
 */
enum FlintStatus flint_codegen(const struct FlintForest *forest,
                               enum FlintFlavor flavor,
                               bool harness,
                               char **out);

/**
 * # Safety
 * `s` must come from a flint function returning an owned string.
 */
void flint_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLINT_H */
