#ifndef LOOPGEN_H
#define LOOPGEN_H

/* This file is generated by cbindgen from loopgen-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every C-ABI call.
typedef enum LoopgenStatus {
  LOOPGEN_STATUS_OK = 0,
  LOOPGEN_STATUS_NULL_ARGUMENT = 1,
  LOOPGEN_STATUS_INVALID_UTF8 = 2,
  LOOPGEN_STATUS_PARSE_ERROR = 3,
  LOOPGEN_STATUS_INVALID_INPUT = 4,
  LOOPGEN_STATUS_CAP_EXCEEDED = 5,
  LOOPGEN_STATUS_BUDGET_EXCEEDED = 6,
} LoopgenStatus;

// Opaque graph handle.
typedef struct LoopgenGraph LoopgenGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread; do not free it.
const char *loopgen_last_error(void);

// Parses a graph from its line-oriented text format.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be a valid
// pointer. On success `*out` owns the graph.
enum LoopgenStatus loopgen_graph_parse(const char *text, struct LoopgenGraph **out);

// Builds one of the standard graphs: `"3j"`, `"5j"`, `"6j"` or `"9j"`.
//
// # Safety
// `name` must be a valid NUL-terminated string; `out` must be valid.
enum LoopgenStatus loopgen_graph_standard(const char *name, struct LoopgenGraph **out);

// Releases a graph handle. Passing NULL is a no-op.
//
// # Safety
// `g` must be a pointer previously returned by this library, not yet freed.
void loopgen_graph_free(struct LoopgenGraph *g);

// Writes the vertex, internal-edge and leg counts.
//
// # Safety
// All pointers must be valid; `g` must be a live graph handle.
enum LoopgenStatus loopgen_graph_counts(const struct LoopgenGraph *g,
                                        uint32_t *vertices,
                                        uint32_t *edges,
                                        uint32_t *legs);

// Serializes a graph back to its text format.
//
// # Safety
// `g` must be a live graph handle; `out` must be valid. The returned string
// must be freed with [`loopgen_string_free`].
enum LoopgenStatus loopgen_graph_serialize(const struct LoopgenGraph *g, char **out);

// Canonical text of the closed-loop-set polynomial.
//
// # Safety
// `g` must be a live graph handle; `out` must be valid. Free the string
// with [`loopgen_string_free`].
enum LoopgenStatus loopgen_loop_polynomial(const struct LoopgenGraph *g, char **out);

// Canonical text of the open-curve polynomial from `from_leg` to `to_leg`.
//
// # Safety
// `g` must be a live graph handle; strings NUL-terminated; `out` valid.
enum LoopgenStatus loopgen_curve_polynomial(const struct LoopgenGraph *g,
                                            const char *from_leg,
                                            const char *to_leg,
                                            char **out);

// Replaces two legs by one oriented internal edge running from `leg1` to
// `leg2`, producing a new graph handle.
//
// # Safety
// `g` must be a live graph handle; strings NUL-terminated; `out` valid.
enum LoopgenStatus loopgen_glue_legs(const struct LoopgenGraph *g,
                                     const char *leg1,
                                     const char *leg2,
                                     const char *new_edge,
                                     struct LoopgenGraph **out);

// Evaluates one symbol exactly. `assignment` is a space-separated list of
// `name=2j` (internal edges) and `name=2j,2m` (legs) tokens. On success
// `*exact` holds the canonical exact value (possibly `0`, or
// `0 (selection rule: ...)` when a selection rule fires) and `*approx` a
// floating-point approximation.
//
// # Safety
// `g` must be a live graph handle; `assignment` NUL-terminated;
// `exact` and `approx` valid pointers. Free `*exact` with
// [`loopgen_string_free`].
enum LoopgenStatus loopgen_symbol(const struct LoopgenGraph *g,
                                  const char *assignment,
                                  char **exact,
                                  double *approx);

// Frees a string returned by this library. Passing NULL is a no-op.
//
// # Safety
// `s` must have been returned by a loopgen function, not yet freed.
void loopgen_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOOPGEN_H */
