#ifndef APWENIAN_H
#define APWENIAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all functions.
typedef enum ApwStatus {
  APW_STATUS_OK = 0,
  APW_STATUS_NULL_POINTER = 1,
  APW_STATUS_INVALID_UTF8 = 2,
  APW_STATUS_PARSE = 3,
  APW_STATUS_INVALID_ARGUMENT = 4,
  APW_STATUS_TOO_SHORT = 5,
  // Input is outside the domain of the operation (even modulus, leading zero, ...).
  APW_STATUS_DOMAIN = 6,
  // A J-fraction or Padé step hit a vanishing or even determinant.
  APW_STATUS_DEGENERATE = 7,
  APW_STATUS_OUT_OF_RANGE = 8,
  APW_STATUS_INTERNAL = 9,
  APW_STATUS_PANIC = 10,
} ApwStatus;

// A 0-1 sequence.
typedef struct ApwBitSeq ApwBitSeq;

// Result of classifying an odd modulus.
typedef struct ApwClassification ApwClassification;

// A ±1 sequence.
typedef struct ApwSignSeq ApwSignSeq;

// Outcome of a Hankel-free criterion check.
typedef struct ApwCriterion {
  bool passed;
  // Largest n examined.
  size_t checked_up_to;
  // First failing n; meaningful only when `passed` is false.
  size_t violation;
} ApwCriterion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL after a success.
// The pointer stays valid until the next call into the library on the same thread.
const char *apw_last_error(void);

// Releases a string produced by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a pointer returned by this library and not yet freed.
void apw_string_free(char *s);

// Parses a string of `0`/`1` characters.
//
// # Safety
// `s` must be a nul-terminated string; `out` must be writable.
enum ApwStatus apw_bitseq_parse(const char *s, struct ApwBitSeq **out_seq);

// # Safety
// `seq` must be NULL or a handle from this library not yet freed.
void apw_bitseq_free(struct ApwBitSeq *seq);

// Length of the sequence; 0 for NULL.
//
// # Safety
// `seq` must be NULL or a live handle.
size_t apw_bitseq_len(const struct ApwBitSeq *seq);

// # Safety
// `seq` must be a live handle and `value` writable.
enum ApwStatus apw_bitseq_get(const struct ApwBitSeq *seq, size_t index, uint8_t *value);

// Parses a string of `+`/`-` characters.
//
// # Safety
// `s` must be a nul-terminated string; `out` must be writable.
enum ApwStatus apw_signseq_parse(const char *s, struct ApwSignSeq **out_seq);

// # Safety
// `seq` must be NULL or a handle from this library not yet freed.
void apw_signseq_free(struct ApwSignSeq *seq);

// # Safety
// `seq` must be NULL or a live handle.
size_t apw_signseq_len(const struct ApwSignSeq *seq);

// Writes +1 or -1 to `value`.
//
// # Safety
// `seq` must be a live handle and `value` writable.
enum ApwStatus apw_signseq_get(const struct ApwSignSeq *seq, size_t index, int8_t *value);

// Prefix of a named 0-1 sequence (`thue-morse-01`, `period-doubling`).
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum ApwStatus apw_named_bitseq(const char *name, size_t len, struct ApwBitSeq **out_seq);

// Prefix of a named ±1 sequence (`thue-morse-pm`, `doubled-thue-morse`, `coded-morphism`).
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum ApwStatus apw_named_signseq(const char *name, size_t len, struct ApwSignSeq **out_seq);

// Fixed point of `1 -> image1, 0 -> image0` starting from 1, e.g. `"10"`, `"11"`.
//
// # Safety
// Both images must be nul-terminated strings; `out` must be writable.
enum ApwStatus apw_fixed_point_01(const char *image1,
                                  const char *image0,
                                  size_t len,
                                  struct ApwBitSeq **out_seq);

// Fixed point of `+1 -> image1, -1 -> image0` starting from +1, e.g. `"+-"`, `"-+"`.
//
// # Safety
// Both images must be nul-terminated strings; `out` must be writable.
enum ApwStatus apw_fixed_point_pm(const char *image1,
                                  const char *image0,
                                  size_t len,
                                  struct ApwSignSeq **out_seq);

// Runs the 0-1 criterion on the whole prefix.
//
// # Safety
// `seq` must be a live handle and `result` writable.
enum ApwStatus apw_check_01(const struct ApwBitSeq *seq, struct ApwCriterion *result);

// Runs the ±1 criterion on the whole prefix.
//
// # Safety
// `seq` must be a live handle and `result` writable.
enum ApwStatus apw_check_pm(const struct ApwSignSeq *seq, struct ApwCriterion *result);

// H_n mod 2 of a 0-1 sequence.
//
// # Safety
// `seq` must be a live handle and `value` writable.
enum ApwStatus apw_hankel_gf2(const struct ApwBitSeq *seq, size_t n, uint8_t *value);

// Writes (H_n / 2^{n-1}) mod 2 for n = 1..=nmax into `bits[0..nmax]`.
// With `exact` set the determinants are computed over the integers.
//
// # Safety
// `seq` must be a live handle and `bits` must have room for `nmax` bytes.
enum ApwStatus apw_pm_profile(const struct ApwSignSeq *seq, size_t nmax, bool exact, uint8_t *bits);

// Number of type II substitutions of length `p` with an apwenian fixed point,
// as a decimal string to be released with [`apw_string_free`].
//
// # Safety
// `value` must be writable.
enum ApwStatus apw_count_apwenian(uint64_t p, char **value);

// Classifies odd `p >= 3`; with `enumerate` the admissible vectors are listed too.
//
// # Safety
// `out` must be writable.
enum ApwStatus apw_classify(uint64_t p, bool enumerate, struct ApwClassification **out_report);

// # Safety
// `report` must be NULL or a handle from this library not yet freed.
void apw_classification_free(struct ApwClassification *report);

// Scalar fields of a classification. Any out-pointer may be NULL to skip it.
//
// # Safety
// `report` must be a live handle; non-NULL out-pointers must be writable.
enum ApwStatus apw_classification_summary(const struct ApwClassification *report,
                                          uint64_t *mu,
                                          uint64_t *k,
                                          bool *has_odd_cycle);

// N_p of a classification as a decimal string.
//
// # Safety
// `report` must be a live handle and `value` writable.
enum ApwStatus apw_classification_count(const struct ApwClassification *report, char **value);

// Number of cycles of the permutation; 0 for NULL.
//
// # Safety
// `report` must be NULL or a live handle.
size_t apw_classification_cycle_count(const struct ApwClassification *report);

// Copies cycle `index` into `buf`. `len` receives the cycle length; when it exceeds
// `cap` nothing is copied and `OutOfRange` is returned, so callers can size a buffer
// by passing `cap = 0` first.
//
// # Safety
// `report` must be a live handle, `len` writable, and `buf` valid for `cap` elements.
enum ApwStatus apw_classification_cycle(const struct ApwClassification *report,
                                        size_t index,
                                        uint64_t *buf,
                                        size_t cap,
                                        size_t *len);

// Number of enumerated vectors; 0 when the report was built without enumeration.
//
// # Safety
// `report` must be NULL or a live handle.
size_t apw_classification_vector_count(const struct ApwClassification *report);

// Copies vector `index` (entries +1/-1) into `buf`, with the same sizing rules as
// [`apw_classification_cycle`].
//
// # Safety
// `report` must be a live handle, `len` writable, and `buf` valid for `cap` elements.
enum ApwStatus apw_classification_vector(const struct ApwClassification *report,
                                         size_t index,
                                         int8_t *buf,
                                         size_t cap,
                                         size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APWENIAN_H */
