#ifndef CROSSNUM_H
#define CROSSNUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CrossnumStatus {
  CROSSNUM_STATUS_OK = 0,
  CROSSNUM_STATUS_NULL_ARGUMENT = 1,
  CROSSNUM_STATUS_INVALID_UTF8 = 2,
  CROSSNUM_STATUS_PARSE = 3,
  CROSSNUM_STATUS_COVER_EXCEEDED = 4,
  CROSSNUM_STATUS_RESOURCE_CAP = 5,
  CROSSNUM_STATUS_MISMATCH = 6,
  CROSSNUM_STATUS_INVALID = 7,
  CROSSNUM_STATUS_INTERNAL = 8,
} CrossnumStatus;

// A graph in compressed form.
typedef struct CrossnumGraph CrossnumGraph;

// Result of [`crossnum_solve`].
typedef struct CrossnumReport CrossnumReport;

// Search limits; start from [`crossnum_options_default`].
typedef struct CrossnumOptions {
  // Negative: no limit.
  int64_t budget_cap;
  uint64_t iqp_node_cap;
  uint64_t max_crossing_sets;
} CrossnumOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty when none. Owned by
// the library and valid until the next call on this thread.
const char *crossnum_last_error(void);

struct CrossnumOptions crossnum_options_default(void);

// Parses an edge list and compresses it around a smallest vertex cover of
// size at most `k_max`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CrossnumStatus crossnum_graph_from_edge_list(const char *text,
                                                  uintptr_t k_max,
                                                  struct CrossnumGraph **out);

// Parses the compressed text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CrossnumStatus crossnum_graph_from_compressed(const char *text, struct CrossnumGraph **out);

// # Safety
// `graph` must come from this library and not be freed twice; null is ignored.
void crossnum_graph_free(struct CrossnumGraph *graph);

// Exact crossing number with the given limits (null for the defaults).
//
// # Safety
// `graph` must be a live handle, `opts` null or valid, `out` a valid pointer.
enum CrossnumStatus crossnum_solve(const struct CrossnumGraph *graph,
                                   const struct CrossnumOptions *opts,
                                   struct CrossnumReport **out);

// # Safety
// `report` must come from this library and not be freed twice; null is ignored.
void crossnum_report_free(struct CrossnumReport *report);

// The crossing number in decimal.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum CrossnumStatus crossnum_report_value(const struct CrossnumReport *report, char **out);

// The crossing number, failing with `ResourceCap` above `u64::MAX`.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum CrossnumStatus crossnum_report_value_u64(const struct CrossnumReport *report, uint64_t *out);

// The full report as JSON.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum CrossnumStatus crossnum_report_json(const struct CrossnumReport *report, char **out);

// The lifted drawing of the whole graph in the interchange format.
//
// # Safety
// Both handles must be live, `report` solved from `graph`; `out` valid.
enum CrossnumStatus crossnum_report_drawing_json(const struct CrossnumReport *report,
                                                 const struct CrossnumGraph *graph,
                                                 char **out);

// Rechecks a report; `Mismatch` names the failing check.
//
// # Safety
// Both handles must be live.
enum CrossnumStatus crossnum_verify(const struct CrossnumReport *report,
                                    const struct CrossnumGraph *graph);

// Brute-force crossing number of the expanded graph (tiny graphs only).
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum CrossnumStatus crossnum_oracle(const struct CrossnumGraph *graph,
                                    uintptr_t max_crossings,
                                    uint64_t *out);

// # Safety
// `s` must come from this library and not be freed twice; null is ignored.
void crossnum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CROSSNUM_H */
