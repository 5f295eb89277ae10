#ifndef LTRGEN_H
#define LTRGEN_H

#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum LtrgenStatus {
  LTRGEN_STATUS_OK = 0,
  LTRGEN_STATUS_NULL_ARGUMENT = 1,
  LTRGEN_STATUS_INVALID_UTF8 = 2,
  LTRGEN_STATUS_PARSE_ERROR = 3,
  LTRGEN_STATUS_UNKNOWN_WORD = 4,
  LTRGEN_STATUS_INTERNAL = 5,
} LtrgenStatus;

/**
 * Loaded lexicons, grammar and templates, ready for generation.
 */
typedef struct LtrgenSession LtrgenSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session from file contents. `grammar`, `phrasal_templates` and
 * `templates` may be null; phrasal templates need a grammar.
 *
 * # Safety
 * String arguments must be null or NUL-terminated. `out` must be a valid
 * pointer to writable storage for one handle.
 */
enum LtrgenStatus ltrgen_session_new(const char *src_lexicon,
                                     const char *tgt_lexicon,
                                     const char *grammar,
                                     const char *phrasal_templates,
                                     const char *templates,
                                     struct LtrgenSession **out);

/**
 * Releases a session. Null is ignored.
 *
 * # Safety
 * `session` must be null or a handle from [`ltrgen_session_new`] that has
 * not been freed.
 */
void ltrgen_session_free(struct LtrgenSession *session);

/**
 * Generates candidates for one `words <-> words` line and writes them in
 * candidate-file format to `out`. Returns `UnknownWord`, with `out` left
 * null, when a source word is missing from the source lexicon.
 *
 * # Safety
 * `session` must be a live handle, `equivalence` NUL-terminated, and `out`
 * valid for one pointer write.
 */
enum LtrgenStatus ltrgen_session_generate(const struct LtrgenSession *session,
                                          const char *equivalence,
                                          char **out);

/**
 * Writes the canonical form of a template line (`n(X) <-> n(X)` becomes
 * `n(A) <-> n(A)`) to `out`.
 *
 * # Safety
 * `template` must be NUL-terminated and `out` valid for one pointer write.
 */
enum LtrgenStatus ltrgen_canonicalize_template(const char *template_, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library that has not been freed.
 */
void ltrgen_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *ltrgen_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTRGEN_H */
