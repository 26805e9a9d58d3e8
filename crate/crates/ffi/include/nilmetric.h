#ifndef NILMETRIC_H
#define NILMETRIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NmEmbeddingKind {
  NM_EMBEDDING_KIND_HEIS_SUBSET = 0,
  NM_EMBEDDING_KIND_HEIS_IN_T = 1,
  NM_EMBEDDING_KIND_CORNER = 2,
  NM_EMBEDDING_KIND_BLOCK = 3,
  NM_EMBEDDING_KIND_COMPOSED = 4,
} NmEmbeddingKind;

typedef enum NmStatus {
  NM_STATUS_OK = 0,
  NM_STATUS_NULL_POINTER = 1,
  NM_STATUS_INVALID_UTF8 = 2,
  NM_STATUS_PARSE_ERROR = 3,
  NM_STATUS_INVALID_ARGUMENT = 4,
  NM_STATUS_DIMENSION_MISMATCH = 5,
  NM_STATUS_INVALID_EMBEDDING = 6,
  NM_STATUS_RESOURCE_LIMIT = 7,
  NM_STATUS_INTERNAL = 8,
} NmStatus;

/**
 * Exact word lengths of a ball in the Cayley graph.
 */
typedef struct NmBall NmBall;

/**
 * Group element, an upper unitriangular integer matrix.
 */
typedef struct NmElement NmElement;

/**
 * Word in the generators `a[i,j]`.
 */
typedef struct NmWord NmWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *nm_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void nm_string_free(char *s);

/**
 * # Safety
 * `out_elem` must be valid for writes.
 */
enum NmStatus nm_element_identity(size_t dim, struct NmElement **out_elem);

/**
 * Builds an element from `n` triples `(is[t], js[t], values[t])`.
 *
 * # Safety
 * The three arrays must hold `n` items each.
 */
enum NmStatus nm_element_from_entries(size_t dim,
                                      const size_t *is,
                                      const size_t *js,
                                      const int64_t *values,
                                      size_t n,
                                      struct NmElement **out_elem);

/**
 * Parses a JSON element document `{"dim":3,"entries":[[1,3,9]]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string.
 */
enum NmStatus nm_element_from_json(const char *json, struct NmElement **out_elem);

/**
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_element_to_json(const struct NmElement *elem, char **out_json);

/**
 * Dimension of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `elem` must be null or a live handle.
 */
size_t nm_element_dim(const struct NmElement *elem);

/**
 * Entry `(i, j)` as a decimal string.
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_element_entry(const struct NmElement *elem, size_t i, size_t j, char **out_value);

/**
 * Entry `(i, j)` as an `int64_t`; fails with `InvalidArgument` on overflow.
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_element_entry_i64(const struct NmElement *elem,
                                   size_t i,
                                   size_t j,
                                   int64_t *out_value);

/**
 * # Safety
 * Both handles must be live.
 */
enum NmStatus nm_element_multiply(const struct NmElement *a,
                                  const struct NmElement *b,
                                  struct NmElement **out_elem);

/**
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_element_inverse(const struct NmElement *elem, struct NmElement **out_elem);

/**
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_element_pow(const struct NmElement *elem, int64_t e, struct NmElement **out_elem);

/**
 * # Safety
 * Both handles must be live.
 */
enum NmStatus nm_element_equal(const struct NmElement *a,
                               const struct NmElement *b,
                               bool *out_equal);

/**
 * # Safety
 * `elem` must be null or a handle that has not been freed.
 */
void nm_element_free(struct NmElement *elem);

/**
 * Parses `a[i,j]^e ...`. With `heisenberg_k > 0` the aliases `a_i`, `b_i`,
 * `c` of `H_k` are accepted too.
 *
 * # Safety
 * `word_text` must be a nul-terminated string.
 */
enum NmStatus nm_word_parse(const char *word_text, size_t heisenberg_k, struct NmWord **out_word);

/**
 * # Safety
 * `word` must be a live handle.
 */
enum NmStatus nm_word_format(const struct NmWord *word, size_t heisenberg_k, char **out_text);

/**
 * Sum of the absolute exponents.
 *
 * # Safety
 * `word` must be a live handle.
 */
enum NmStatus nm_word_length(const struct NmWord *word, uint64_t *out_length);

/**
 * # Safety
 * `word` must be a live handle.
 */
enum NmStatus nm_word_evaluate(const struct NmWord *word, size_t dim, struct NmElement **out_elem);

/**
 * # Safety
 * `word` must be null or a handle that has not been freed.
 */
void nm_word_free(struct NmWord *word);

/**
 * Normal form as text, greatest generator first (Heisenberg aliases when
 * `heisenberg_k > 0`).
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_normal_form_string(const struct NmElement *elem,
                                    size_t heisenberg_k,
                                    char **out_text);

/**
 * Metric estimate in `T_dim`, or in `H_k` when `heisenberg_k > 0`.
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_estimate(const struct NmElement *elem, size_t heisenberg_k, double *out_value);

/**
 * Short word for `elem`, built from its normal form.
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_short_word(const struct NmElement *elem,
                            size_t heisenberg_k,
                            struct NmWord **out_word);

/**
 * Collects `word` into normal form, returning the element and the number of
 * swaps performed.
 *
 * # Safety
 * `word` must be a live handle.
 */
enum NmStatus nm_collect(const struct NmWord *word,
                         size_t dim,
                         struct NmElement **out_elem,
                         uint64_t *out_swaps);

/**
 * Breadth-first ball of `radius` in `T_dim` for the generators
 * `(gens[2t], gens[2t+1])`, `t < n_gens`. Storing more than `budget`
 * elements fails with `ResourceLimit`.
 *
 * # Safety
 * `gens` must hold `2 * n_gens` items.
 */
enum NmStatus nm_ball_new(size_t dim,
                          const size_t *gens,
                          size_t n_gens,
                          uint32_t radius,
                          size_t budget,
                          struct NmBall **out_ball);

/**
 * Number of elements in the ball, or 0 for a null handle.
 *
 * # Safety
 * `ball` must be null or a live handle.
 */
size_t nm_ball_size(const struct NmBall *ball);

/**
 * Exact word length of `elem`, or -1 when it lies outside the ball.
 *
 * # Safety
 * Both handles must be live.
 */
enum NmStatus nm_ball_exact_length(const struct NmBall *ball,
                                   const struct NmElement *elem,
                                   int64_t *out_length);

/**
 * # Safety
 * `ball` must be null or a handle that has not been freed.
 */
void nm_ball_free(struct NmBall *ball);

/**
 * Exponent `j - i` of the smallest generator in the normal form of `elem`.
 *
 * # Safety
 * `elem` must be a live handle.
 */
enum NmStatus nm_cyclic_exponent(const struct NmElement *elem, uint32_t *out_exponent);

/**
 * Fits the distortion exponent of an embedding on the grid up to `n_max`.
 * `subset` is only read for `HeisSubset`, `a` for `Block` and `Composed`,
 * `r` for `Composed`. A fit that cannot be made reports NaN.
 *
 * # Safety
 * `subset` must hold `subset_len` items.
 */
enum NmStatus nm_distortion_fit(enum NmEmbeddingKind kind,
                                size_t k,
                                size_t l,
                                size_t a,
                                size_t r,
                                const size_t *subset,
                                size_t subset_len,
                                uint64_t n_max,
                                size_t random_samples,
                                uint64_t seed,
                                double *out_fitted,
                                uint32_t *out_predicted);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILMETRIC_H */
