#ifndef POWERWEIGHT_H
#define POWERWEIGHT_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  PW_STATUS_INVALID_UTF8 = 2,
  PW_STATUS_DOMAIN = 3,
  PW_STATUS_PARSE = 4,
  PW_STATUS_FORMAT = 5,
  PW_STATUS_DUPLICATE_ID = 6,
  PW_STATUS_EMPTY_CORPUS = 7,
  PW_STATUS_IO = 8,
  PW_STATUS_INDEX_FORMAT = 9,
  PW_STATUS_OUT_OF_RANGE = 10,
  PW_STATUS_PANIC = 11,
} PwStatus;

/**
 * Opaque inverted index.
 */
typedef struct PwIndex PwIndex;

/**
 * Opaque ranked result list.
 */
typedef struct PwResults PwResults;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pw_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pw_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_tukey_transform(double y, double lambda1, double lambda2, double *out);

/**
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_boxcox_transform(double y, double lambda1, double lambda2, double *out);

/**
 * Local weight of a term with frequency `f` under the scheme named by
 * `scheme` (e.g. `"logn"`, `"boxcox:-1:1"`, `"bm25ir:1.2:0.75"`).
 *
 * # Safety
 * `scheme` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PwStatus pw_local_weight(const char *scheme,
                              uint64_t f,
                              uint64_t doc_length,
                              double ave_doc_length,
                              double ave_term_freq,
                              double *out);

/**
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_attenuation_k(double k1, double b, double ratio, double *out);

/**
 * BM25 local weight; `b = 1` gives BM11, `b = 0` gives BM15.
 *
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_bm_local(uint64_t f,
                          double k1,
                          double b,
                          double ratio,
                          bool apply_scale,
                          double *out);

/**
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_bm25ir_local(uint64_t f,
                              double k1,
                              double b,
                              double ratio,
                              bool apply_scale,
                              double *out);

/**
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum PwStatus pw_critical_k(double tolerance, double *out);

/**
 * Occurrence index carrying the largest increment of `1 - 1/(f + k)`.
 *
 * # Safety
 * `out` must be a valid pointer to a `uint64_t`.
 */
enum PwStatus pw_increment_argmax(double k, uint64_t n_max, uint64_t *out);

/**
 * # Safety
 * `a` and `b` must each point to `len` readable `uint64_t` values.
 */
enum PwStatus pw_kendall_tau(const uint64_t *a, const uint64_t *b, size_t len, double *out);

/**
 * Build an index from JSON lines (`{"id": <int>, "text": <string>}`).
 *
 * # Safety
 * `jsonl` must be a NUL-terminated string; `out` a valid pointer that
 * receives a handle to free with [`pw_index_free`].
 */
enum PwStatus pw_index_from_jsonl(const char *jsonl, struct PwIndex **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` a valid pointer.
 */
enum PwStatus pw_index_load(const char *path, struct PwIndex **out);

/**
 * # Safety
 * `index` must be a live handle and `path` a NUL-terminated string.
 */
enum PwStatus pw_index_save(const struct PwIndex *index, const char *path);

/**
 * Number of indexed documents, or 0 for a NULL handle.
 *
 * # Safety
 * `index` must be NULL or a live handle.
 */
size_t pw_index_num_docs(const struct PwIndex *index);

/**
 * # Safety
 * `index` must be NULL or a live handle.
 */
double pw_index_avedl(const struct PwIndex *index);

/**
 * # Safety
 * `index` must be NULL or a handle not yet freed.
 */
void pw_index_free(struct PwIndex *index);

/**
 * Rank documents for `query` under `scheme`, keeping at most `top_k`.
 *
 * # Safety
 * `index` must be a live handle, `query` and `scheme` NUL-terminated
 * strings, and `out` a valid pointer that receives a handle to free with
 * [`pw_results_free`].
 */
enum PwStatus pw_rank(const struct PwIndex *index,
                      const char *query,
                      const char *scheme,
                      size_t top_k,
                      struct PwResults **out);

/**
 * # Safety
 * `results` must be NULL or a live handle.
 */
size_t pw_results_len(const struct PwResults *results);

/**
 * Read the hit at zero-based `position`.
 *
 * # Safety
 * `results` must be a live handle; `doc_id` and `score` valid pointers.
 */
enum PwStatus pw_results_get(const struct PwResults *results,
                             size_t position,
                             uint64_t *doc_id,
                             double *score);

/**
 * # Safety
 * `results` must be NULL or a handle not yet freed.
 */
void pw_results_free(struct PwResults *results);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POWERWEIGHT_H */
