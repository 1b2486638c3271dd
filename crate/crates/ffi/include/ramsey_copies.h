#ifndef RAMSEY_COPIES_H
#define RAMSEY_COPIES_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Arrowing modes.
 */
typedef enum RfMode {
  RF_MODE_NNI = 0,
  RF_MODE_INDUCED = 1,
  RF_MODE_ORDERED = 2,
} RfMode;

typedef enum RfStatus {
  RF_STATUS_OK = 0,
  RF_STATUS_INVALID_INPUT = 1,
  RF_STATUS_PRECONDITION = 2,
  RF_STATUS_BUDGET_EXHAUSTED = 3,
  RF_STATUS_LEMMA_VIOLATION = 4,
  RF_STATUS_NULL_POINTER = 5,
  RF_STATUS_PANIC = 6,
} RfStatus;

/**
 * An edge colouring of some graph.
 */
typedef struct RfColouring RfColouring;

/**
 * A simple graph.
 */
typedef struct RfGraph RfGraph;

/**
 * A linear hypergraph.
 */
typedef struct RfHypergraph RfHypergraph;

/**
 * `d2` and `m2` as reduced fractions.
 */
typedef struct RfDensity {
  int64_t d2_numer;
  int64_t d2_denom;
  int64_t m2_numer;
  int64_t m2_denom;
  bool strictly_balanced;
} RfDensity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *rf_last_error(void);

/**
 * Builds a graph from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values; `out` must be writable.
 */
enum RfStatus rf_graph_new(size_t n, const size_t *edges, size_t edge_count, struct RfGraph **out);

/**
 * A named template such as `K3`, `C5`, `K2,2,2` or `petersen`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum RfStatus rf_graph_template(const char *name, struct RfGraph **out);

/**
 * Reads a graph in the canonical or edge-list format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum RfStatus rf_graph_parse(const char *text, struct RfGraph **out);

/**
 * Canonical text of a graph; release with `rf_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum RfStatus rf_graph_to_json(const struct RfGraph *g, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void rf_string_free(char *s);

/**
 * # Safety
 * `g` must be a live handle or null.
 */
void rf_graph_free(struct RfGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t rf_graph_vertex_count(const struct RfGraph *g);

/**
 * # Safety
 * `g` must be a live handle.
 */
size_t rf_graph_edge_count(const struct RfGraph *g);

/**
 * `m` copies of `template` glued along an edge.
 *
 * # Safety
 * `template` must be a live handle; `out` must be writable.
 */
enum RfStatus rf_amalgam(const struct RfGraph *template_, size_t m, struct RfGraph **out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum RfStatus rf_density(const struct RfGraph *g, struct RfDensity *out);

/**
 * Decides `host -> (template)_r`. When it does not arrow and `witness` is
 * non-null, a colouring without monochromatic copies is stored there.
 *
 * # Safety
 * Handles must be live; `arrows_out` must be writable; `witness` may be null.
 */
enum RfStatus rf_arrows(const struct RfGraph *host,
                        const struct RfGraph *template_,
                        size_t r,
                        enum RfMode mode,
                        uint64_t max_nodes,
                        bool *arrows_out,
                        struct RfColouring **witness);

/**
 * Number of monochromatic copies of `template` under `colouring`.
 *
 * # Safety
 * Handles must be live; `count` must be writable.
 */
enum RfStatus rf_verify_colouring(const struct RfGraph *host,
                                  const struct RfGraph *template_,
                                  const struct RfColouring *colouring,
                                  enum RfMode mode,
                                  size_t *count);

/**
 * Colouring of a host without `(m, template)`, template balanced complete multipartite.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum RfStatus rf_multipartite_colouring(const struct RfGraph *host,
                                        const struct RfGraph *template_,
                                        size_t m,
                                        struct RfColouring **out);

/**
 * Colouring of a host without `(m, C_length)` without monochromatic `length`-cycles.
 *
 * # Safety
 * `host` must be live; `out` must be writable.
 */
enum RfStatus rf_cycle_colouring(const struct RfGraph *host,
                                 size_t length,
                                 size_t m,
                                 struct RfColouring **out);

/**
 * # Safety
 * `c` must be a live handle.
 */
size_t rf_colouring_colour_count(const struct RfColouring *c);

/**
 * Colour of the `edge`-th host edge in sorted order, or `usize::MAX` when out of range.
 *
 * # Safety
 * `c` must be a live handle.
 */
size_t rf_colouring_colour(const struct RfColouring *c, size_t edge);

/**
 * # Safety
 * `c` must be a live handle or null.
 */
void rf_colouring_free(struct RfColouring *c);

/**
 * Triples of `1..n` summing to `n` or `2n`, stored 0-based.
 *
 * # Safety
 * `out` must be writable.
 */
enum RfStatus rf_sum_hypergraph(size_t n, struct RfHypergraph **out);

/**
 * # Safety
 * `h` must be a live handle.
 */
size_t rf_hypergraph_edge_count(const struct RfHypergraph *h);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum RfStatus rf_hypergraph_is_inseparable(const struct RfHypergraph *h, bool *out);

/**
 * # Safety
 * `h` must be a live handle or null.
 */
void rf_hypergraph_free(struct RfHypergraph *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAMSEY_COPIES_H */
