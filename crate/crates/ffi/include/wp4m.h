/* C interface to the wp4m group-presentation toolkit. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. Matches the command-line exit codes
// for the first four values.
typedef enum Wp4mStatus {
  WP4M_STATUS_OK = 0,
  WP4M_STATUS_PARSE_ERROR = 1,
  WP4M_STATUS_PRECONDITION_VIOLATED = 2,
  WP4M_STATUS_BOUND_EXCEEDED = 3,
  WP4M_STATUS_NULL_ARGUMENT = 4,
  WP4M_STATUS_INTERNAL_PANIC = 5,
} Wp4mStatus;

// Coset definition order for [`wp4m_enumerate_order`].
typedef enum Wp4mStrategy {
  WP4M_STRATEGY_HLT = 0,
  WP4M_STRATEGY_FELSCH = 1,
} Wp4mStrategy;

// Finite hom-count target for [`wp4m_hom_count`].
typedef enum Wp4mTarget {
  WP4M_TARGET_S3 = 0,
  WP4M_TARGET_A4 = 1,
  WP4M_TARGET_S4 = 2,
  WP4M_TARGET_S5 = 3,
} Wp4mTarget;

// Opaque handle to a finitely presented group.
typedef struct Wp4mPresentation Wp4mPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message from the most recent failing call on this thread, empty when
// none. The pointer stays valid until the next failing call on the
// same thread; do not free it.
//
// # Safety
// Always safe to call; the returned pointer must not outlive the next
// failing call on this thread.
const char *wp4m_last_error(void);

// Frees a string returned by any `wp4m_` call. Null is a no-op.
//
// # Safety
// `s` must be null or a pointer previously returned by this library
// and not yet freed.
void wp4m_string_free(char *s);

// Parses the presentation file format (`gens:` and `rel:` lines) and
// stores a fresh handle in `out`.
//
// # Safety
// `text` must be null or NUL-terminated; `out` must point to writable
// memory. On success the caller owns the handle and must release it
// with [`wp4m_presentation_free`].
enum Wp4mStatus wp4m_presentation_parse(const char *text, struct Wp4mPresentation **out);

// Releases a handle returned by this library. Null is a no-op.
//
// # Safety
// `p` must be null or a handle previously returned by this library
// and not yet freed.
void wp4m_presentation_free(struct Wp4mPresentation *p);

// Renders the presentation in its file format; the caller frees the
// string with [`wp4m_string_free`]. Returns null on a null handle.
//
// # Safety
// `p` must be null or a live handle from this library.
char *wp4m_presentation_render(const struct Wp4mPresentation *p);

// Number of generators; 0 on a null handle.
//
// # Safety
// `p` must be null or a live handle from this library.
size_t wp4m_presentation_generator_count(const struct Wp4mPresentation *p);

// Number of relators; 0 on a null handle.
//
// # Safety
// `p` must be null or a live handle from this library.
size_t wp4m_presentation_relator_count(const struct Wp4mPresentation *p);

// Builds the padded presentation Q_w for a word over the seed and
// stores a fresh handle in `out`.
//
// # Safety
// `seed` must be a live handle; `word` a NUL-terminated string; `out`
// writable. The caller owns the new handle on success.
enum Wp4mStatus wp4m_build_qw(const struct Wp4mPresentation *seed,
                              const char *word,
                              struct Wp4mPresentation **out);

// Builds the two-generator presentation P_w for a word over the seed
// and stores a fresh handle in `out`.
//
// # Safety
// `seed` must be a live handle; `word` a NUL-terminated string; `out`
// writable. The caller owns the new handle on success.
enum Wp4mStatus wp4m_build_pw(const struct Wp4mPresentation *seed,
                              const char *word,
                              struct Wp4mPresentation **out);

// Runs coset enumeration over the trivial subgroup. On completion
// writes the group order to `out_order`; when the coset budget runs
// out, returns `BoundExceeded` and leaves `out_order` untouched.
//
// # Safety
// `p` must be a live handle and `out_order` writable.
enum Wp4mStatus wp4m_enumerate_order(const struct Wp4mPresentation *p,
                                     size_t max_cosets,
                                     enum Wp4mStrategy strategy,
                                     uint64_t *out_order);

// Counts homomorphisms into the chosen target using `jobs` worker
// threads and writes the count to `out_count`.
//
// # Safety
// `p` must be a live handle and `out_count` writable.
enum Wp4mStatus wp4m_hom_count(const struct Wp4mPresentation *p,
                               enum Wp4mTarget target,
                               size_t jobs,
                               uint64_t *out_count);

// Reduces a tuple with gcd 1 to (1,0,...,0) and stores the move script
// (`sub r s xN` and `perm ...` lines) in `out_script`; the caller
// frees it with [`wp4m_string_free`].
//
// # Safety
// `entries` must point to `len` readable values and `out_script` must
// be writable.
enum Wp4mStatus wp4m_slide_moves(const uint64_t *entries, size_t len, char **out_script);

// Decides a word in the free product of cyclic groups of the given
// orders (generators are named x1..xn). Writes 1 to `out_trivial` for
// the identity, else 0; when nontrivial and `out_normal_form` is not
// null, also stores the syllable normal form for the caller to free
// with [`wp4m_string_free`].
//
// # Safety
// `orders` must point to `len` readable values, `word` must be
// NUL-terminated, `out_trivial` writable, and `out_normal_form` null
// or writable.
enum Wp4mStatus wp4m_cyclic_word_verdict(const uint64_t *orders,
                                         size_t len,
                                         const char *word,
                                         uint8_t *out_trivial,
                                         char **out_normal_form);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
