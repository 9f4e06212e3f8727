#ifndef DYNSEP_H
#define DYNSEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum DynsepStatus {
  DYNSEP_STATUS_OK = 0,
  DYNSEP_STATUS_NULL_POINTER = 1,
  DYNSEP_STATUS_SELF_LOOP = 2,
  DYNSEP_STATUS_OUT_OF_RANGE = 3,
  DYNSEP_STATUS_DUPLICATE_EDGE = 4,
  DYNSEP_STATUS_MISSING_EDGE = 5,
  /**
   * No vertex can serve as a pivot; the structure declared failure.
   */
  DYNSEP_STATUS_NO_VALID_PIVOT = 6,
  DYNSEP_STATUS_EMPTY_GRAPH = 7,
  DYNSEP_STATUS_BUFFER_TOO_SMALL = 8,
  /**
   * A Rust panic was caught; the handle should be freed.
   */
  DYNSEP_STATUS_INTERNAL = 9,
} DynsepStatus;

/**
 * Opaque decremental triangle detector.
 */
typedef struct DynsepDecrTriangle DynsepDecrTriangle;

/**
 * Opaque undirected graph on a fixed vertex set.
 */
typedef struct DynsepGraph DynsepGraph;

/**
 * Opaque decremental maximal clique per connected component.
 */
typedef struct DynsepMccc DynsepMccc;

/**
 * Opaque fully dynamic maximal independent set.
 */
typedef struct DynsepMis DynsepMis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *dynsep_status_message(enum DynsepStatus status);

/**
 * Creates an edgeless graph on `n` vertices.
 */
enum DynsepStatus dynsep_graph_new(size_t n, struct DynsepGraph **out);

void dynsep_graph_free(struct DynsepGraph *g);

enum DynsepStatus dynsep_graph_insert_edge(struct DynsepGraph *g, size_t u, size_t v);

enum DynsepStatus dynsep_graph_delete_edge(struct DynsepGraph *g, size_t u, size_t v);

enum DynsepStatus dynsep_graph_has_edge(const struct DynsepGraph *g, size_t u, size_t v, bool *out);

enum DynsepStatus dynsep_graph_vertex_count(const struct DynsepGraph *g, size_t *out);

enum DynsepStatus dynsep_graph_edge_count(const struct DynsepGraph *g, size_t *out);

/**
 * Builds a detector over a snapshot of `g`; later changes to `g` are not seen.
 */
enum DynsepStatus dynsep_decr_triangle_new(const struct DynsepGraph *g,
                                           uint64_t seed,
                                           struct DynsepDecrTriangle **out);

void dynsep_decr_triangle_free(struct DynsepDecrTriangle *t);

/**
 * Current triangle. `*found` is false once the graph is triangle-free;
 * otherwise the sorted vertices are written to `triangle[0..3]`.
 */
enum DynsepStatus dynsep_decr_triangle_active(const struct DynsepDecrTriangle *t,
                                              bool *found,
                                              size_t *triangle);

/**
 * Deletes edge `{u, v}` and reports the triangle afterwards, as in
 * `dynsep_decr_triangle_active`.
 */
enum DynsepStatus dynsep_decr_triangle_delete(struct DynsepDecrTriangle *t,
                                              size_t u,
                                              size_t v,
                                              bool *found,
                                              size_t *triangle);

/**
 * Number of stages begun so far.
 */
enum DynsepStatus dynsep_decr_triangle_stage_count(const struct DynsepDecrTriangle *t, size_t *out);

/**
 * Builds a fully dynamic MIS over a snapshot of `g`.
 */
enum DynsepStatus dynsep_mis_new(const struct DynsepGraph *g, struct DynsepMis **out);

void dynsep_mis_free(struct DynsepMis *m);

enum DynsepStatus dynsep_mis_insert_edge(struct DynsepMis *m, size_t u, size_t v);

enum DynsepStatus dynsep_mis_delete_edge(struct DynsepMis *m, size_t u, size_t v);

enum DynsepStatus dynsep_mis_contains(const struct DynsepMis *m, size_t v, bool *out);

/**
 * Members in increasing order (caller-buffer convention).
 */
enum DynsepStatus dynsep_mis_members(const struct DynsepMis *m,
                                     size_t *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Total membership changes since construction.
 */
enum DynsepStatus dynsep_mis_recourse(const struct DynsepMis *m, uint64_t *out);

/**
 * Builds the decremental per-component maximal clique structure.
 */
enum DynsepStatus dynsep_mccc_new(const struct DynsepGraph *g,
                                  uint64_t seed,
                                  struct DynsepMccc **out);

void dynsep_mccc_free(struct DynsepMccc *c);

/**
 * Deletes edge `{u, v}`. `DYNSEP_STATUS_NO_VALID_PIVOT` means the
 * structure declared failure; its output is no longer meaningful.
 */
enum DynsepStatus dynsep_mccc_delete_edge(struct DynsepMccc *c, size_t u, size_t v);

/**
 * Union of the per-component cliques, sorted (caller-buffer convention).
 */
enum DynsepStatus dynsep_mccc_output(const struct DynsepMccc *c,
                                     size_t *buf,
                                     size_t cap,
                                     size_t *len);

/**
 * Clique reported for the component of `v`, sorted.
 */
enum DynsepStatus dynsep_mccc_component_clique(const struct DynsepMccc *c,
                                               size_t v,
                                               size_t *buf,
                                               size_t cap,
                                               size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNSEP_H */
