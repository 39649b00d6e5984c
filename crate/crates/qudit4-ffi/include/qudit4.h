#ifndef QUDIT4_H
#define QUDIT4_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum Qudit4Status {
  Qudit4Ok = 0,
  /**
   * A pointer argument was null.
   */
  Qudit4NullPointer = 1,
  /**
   * An argument failed validation (range, normalization, parse).
   */
  Qudit4InvalidArgument = 2,
  /**
   * The matrix is not a valid density matrix.
   */
  Qudit4InvalidState = 3,
  /**
   * The numeric backend failed; should not happen on valid input.
   */
  Qudit4InternalError = 4,
} Qudit4Status;

/**
 * Opaque density-matrix handle.
 */
typedef struct Qudit4State Qudit4State;

/**
 * Flat entanglement report, mirror of the library's analyze output.
 */
typedef struct Qudit4Report {
  /**
   * Partial-transpose eigenvalues, descending.
   */
  double ppt_spectrum[4];
  double negativity;
  double concurrence;
  double min_ppt_eig;
  /**
   * 1 when the state is separable.
   */
  bool separable;
  /**
   * 1 when the smallest eigenvalue sits at the verdict tolerance.
   */
  bool boundary;
} Qudit4Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the diagonal state from four eigenvalues (nonnegative, summing to 1).
 *
 * # Safety
 * `eigenvalues` must point to four doubles; `out` must be a valid pointer.
 */
enum Qudit4Status qudit4_state_from_spectrum(const double *eigenvalues, struct Qudit4State **out);

/**
 * Builds the Werner state for `p` in [-1/3, 1].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum Qudit4Status qudit4_state_werner(double p, struct Qudit4State **out);

/**
 * Parses a density-matrix JSON document.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be valid.
 */
enum Qudit4Status qudit4_state_from_json(const char *text, struct Qudit4State **out);

/**
 * Serializes the state as JSON; the caller frees the string.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid.
 */
enum Qudit4Status qudit4_state_to_json(const struct Qudit4State *state, char **out);

/**
 * Conjugates the state by the one-angle rotation acting on levels 1 and 4.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid.
 */
enum Qudit4Status qudit4_state_rotate_1_4(const struct Qudit4State *state,
                                          double phi,
                                          struct Qudit4State **out);

/**
 * Computes the entanglement report for the state.
 *
 * # Safety
 * `state` must be a live handle; `out` must point to a report struct.
 */
enum Qudit4Status qudit4_state_analyze(const struct Qudit4State *state, struct Qudit4Report *out);

/**
 * Releases a state handle; accepts null.
 *
 * # Safety
 * `state` must be null or a handle returned by this library, not yet freed.
 */
void qudit4_state_free(struct Qudit4State *state);

/**
 * Releases a string returned by this library; accepts null.
 *
 * # Safety
 * `text` must be null or a string returned by this library, not yet freed.
 */
void qudit4_string_free(char *text);

/**
 * Human-readable name for a status code; static storage, do not free.
 */
const char *qudit4_status_name(enum Qudit4Status status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QUDIT4_H */
