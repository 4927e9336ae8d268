/* gcla C API — grammar-compressed linear algebra */

#ifndef GCLA_H
#define GCLA_H

/* Generated by cbindgen; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes for every fallible entry point.
 */
typedef enum GclaStatus {
  GCLA_STATUS_OK = 0,
  GCLA_STATUS_INVALID_SYMBOL = 1,
  GCLA_STATUS_LENGTH_OVERFLOW = 2,
  GCLA_STATUS_BUDGET_EXCEEDED = 3,
  GCLA_STATUS_ELEMENT_OUT_OF_UNIVERSE = 4,
  GCLA_STATUS_DIMENSION_MISMATCH = 5,
  GCLA_STATUS_INVALID_INSTANCE = 6,
  GCLA_STATUS_MIXED_TARGETS = 7,
  GCLA_STATUS_INVALID_FORM = 8,
  GCLA_STATUS_PARSE_ERROR = 9,
  GCLA_STATUS_IO_ERROR = 10,
  GCLA_STATUS_NULL_POINTER = 11,
  GCLA_STATUS_INVALID_UTF8 = 12,
  GCLA_STATUS_BUFFER_TOO_SMALL = 13,
} GclaStatus;

/*
 Inner-product evaluation strategy.
 */
typedef enum GclaStrategy {
  GCLA_STRATEGY_DECOMPRESS = 0,
  GCLA_STRATEGY_RUN_MERGE = 1,
  GCLA_STRATEGY_RLE = 2,
} GclaStrategy;

/*
 Opaque run-length sequence handle.
 */
typedef struct GclaRle GclaRle;

/*
 Opaque straight-line program handle.
 */
typedef struct GclaSlp GclaSlp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Frees an SLP handle. Passing NULL is a no-op.

 # Safety
 `g` must be a pointer previously returned by a `gcla_slp_*` constructor
 and not yet freed.
 */
void gcla_slp_free(struct GclaSlp *g);

/*
 Frees an RLE handle. Passing NULL is a no-op.

 # Safety
 `r` must be a pointer previously returned by a `gcla_rle_*` constructor
 and not yet freed.
 */
void gcla_rle_free(struct GclaRle *r);

/*
 Frees a string returned by one of the `*_to_text` functions.

 # Safety
 `s` must originate from this library and not have been freed already.
 */
void gcla_string_free(char *s);

/*
 Single-terminal grammar for `bit` (0 or 1).

 # Safety
 `out` must be a valid pointer to a `GclaSlp*`.
 */
enum GclaStatus gcla_slp_terminal(uint8_t bit, struct GclaSlp **out);

/*
 Concatenation of two grammars.

 # Safety
 `a` and `b` must be valid handles; `out` a valid out-pointer.
 */
enum GclaStatus gcla_slp_concat(const struct GclaSlp *a,
                                const struct GclaSlp *b,
                                struct GclaSlp **out);

/*
 `alpha`-fold repetition (alpha >= 1).

 # Safety
 `g` must be a valid handle; `out` a valid out-pointer.
 */
enum GclaStatus gcla_slp_repeat(const struct GclaSlp *g, uint64_t alpha, struct GclaSlp **out);

/*
 The string 0^k (k >= 1).

 # Safety
 `out` must be a valid out-pointer.
 */
enum GclaStatus gcla_slp_zeros(uint64_t k, struct GclaSlp **out);

/*
 The string 1^k (k >= 1).

 # Safety
 `out` must be a valid out-pointer.
 */
enum GclaStatus gcla_slp_ones(uint64_t k, struct GclaSlp **out);

/*
 Characteristic vector of the set `xs[0..len]` within {1..universe}.

 # Safety
 `xs` must point to `len` readable u64 values (or be NULL when len is 0);
 `out` must be valid.
 */
enum GclaStatus gcla_slp_char_vector(const uint64_t *xs,
                                     size_t len,
                                     uint64_t universe,
                                     struct GclaSlp **out);

/*
 Number of grammar rules; 0 for NULL.

 # Safety
 `g` must be a valid handle or NULL.
 */
uint64_t gcla_slp_size(const struct GclaSlp *g);

/*
 Expansion length N; 0 for NULL.

 # Safety
 `g` must be a valid handle or NULL.
 */
uint64_t gcla_slp_expansion_length(const struct GclaSlp *g);

/*
 Expands the grammar into `buf` as 0/1 bytes. Fails with BufferTooSmall
 when the expansion does not fit in `buf_len`; `written` receives the
 number of bytes produced.

 # Safety
 `buf` must point to `buf_len` writable bytes; `written` must be valid.
 */
enum GclaStatus gcla_slp_expand(const struct GclaSlp *g,
                                uint8_t *buf,
                                size_t buf_len,
                                size_t *written);

/*
 Serializes to the "slp v1" text form.

 # Safety
 `out` must be valid; free the result with `gcla_string_free`.
 */
enum GclaStatus gcla_slp_to_text(const struct GclaSlp *g, char **out);

/*
 Parses the "slp v1" text form.

 # Safety
 `text` must be a valid NUL-terminated string; `out` a valid out-pointer.
 */
enum GclaStatus gcla_slp_from_text(const char *text, struct GclaSlp **out);

/*
 Converts an SLP to its canonical run-length encoding.

 # Safety
 `g` must be a valid handle; `out` a valid out-pointer.
 */
enum GclaStatus gcla_rle_from_slp(const struct GclaSlp *g, struct GclaRle **out);

/*
 Number of runs; 0 for NULL.

 # Safety
 `r` must be a valid handle or NULL.
 */
uint64_t gcla_rle_n_runs(const struct GclaRle *r);

/*
 Total decoded length; 0 for NULL.

 # Safety
 `r` must be a valid handle or NULL.
 */
uint64_t gcla_rle_total_len(const struct GclaRle *r);

/*
 Serializes to the "rle v1" text form.

 # Safety
 `out` must be valid; free the result with `gcla_string_free`.
 */
enum GclaStatus gcla_rle_to_text(const struct GclaRle *r, char **out);

/*
 Parses the "rle v1" text form.

 # Safety
 `text` must be a valid NUL-terminated string; `out` a valid out-pointer.
 */
enum GclaStatus gcla_rle_from_text(const char *text, struct GclaRle **out);

/*
 Exact inner product of two grammar-compressed vectors. `budget` only
 constrains the Decompress strategy.

 # Safety
 `a` and `b` must be valid handles; `out` a valid out-pointer.
 */
enum GclaStatus gcla_inner_product(const struct GclaSlp *a,
                                   const struct GclaSlp *b,
                                   enum GclaStrategy strategy,
                                   uint64_t budget,
                                   uint64_t *out);

/*
 One-pass RLE inner product; also reports the merge-step count.

 # Safety
 `a` and `b` must be valid handles; `out` and `steps` valid out-pointers.
 */
enum GclaStatus gcla_rle_inner_product(const struct GclaRle *a,
                                       const struct GclaRle *b,
                                       uint64_t *out,
                                       uint64_t *steps);

/*
 Runs the 3SUM-to-inner-product reduction on sets `a`, `b`, `c` within
 {1..universe}: emits the two compressed vectors, the dimension, and the
 brute-force answer (1 = YES) so callers can certify the construction.

 # Safety
 The three set pointers must each point to the declared number of
 readable i64 values; all out-pointers must be valid.
 */
enum GclaStatus gcla_reduce_3sum_to_ip(const int64_t *a,
                                       size_t a_len,
                                       const int64_t *b,
                                       size_t b_len,
                                       const int64_t *c,
                                       size_t c_len,
                                       int64_t universe,
                                       struct GclaSlp **out_left,
                                       struct GclaSlp **out_right,
                                       uint64_t *out_dim,
                                       int32_t *out_expected_yes);

/*
 Brute-force 3SUM oracle. `mode` 0 checks a+b=c, 1 checks a+b+c=target.
 Writes 1 for YES, 0 for NO.

 # Safety
 Set pointers must be readable for their lengths; `out_yes` valid.
 */
enum GclaStatus gcla_brute_3sum(const int64_t *a,
                                size_t a_len,
                                const int64_t *b,
                                size_t b_len,
                                const int64_t *c,
                                size_t c_len,
                                int64_t universe,
                                int32_t mode,
                                int64_t target,
                                int32_t *out_yes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCLA_H */
