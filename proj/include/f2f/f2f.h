#ifndef F2F_F2F_H
#define F2F_F2F_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define F2F_API __declspec(dllexport)
#elif defined(__GNUC__)
#define F2F_API __attribute__((visibility("default")))
#else
#define F2F_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum f2f_status {
  F2F_OK = 0,
  F2F_ERR_PARSE = 1,
  F2F_ERR_INVALID_INPUT = 2,
  F2F_ERR_DOMAIN = 3,
  F2F_ERR_GENERATION = 4,
  F2F_ERR_CONSTRUCTION = 5,
  F2F_ERR_JOIN = 6,
  F2F_ERR_ROOT_DEPARTURE = 7,
  F2F_ERR_STATE = 8,
  F2F_ERR_UNSUPPORTED = 9,
  F2F_ERR_VALIDATION = 10,
  F2F_ERR_IO = 11,
  F2F_ERR_NULL_ARGUMENT = 12,
  F2F_ERR_INTERNAL = 13
} f2f_status;

typedef struct f2f_graph f2f_graph;
typedef struct f2f_scenario f2f_scenario;
typedef struct f2f_result f2f_result;

typedef struct f2f_graph_stats {
  uint64_t node_count;
  uint64_t edge_count;
  uint64_t giant_component_size;
  int32_t diameter_estimate;
  double average_degree;
} f2f_graph_stats;

typedef struct f2f_metric_row {
  const char* scenario; /* valid until the result is modified or freed */
  const char* metric;
  double mean;
  double ci95;
  uint64_t runs;
} f2f_metric_row;

typedef void (*f2f_log_fn)(const char* message, void* user);

/* Message for the last failed call on this thread; never NULL. */
F2F_API const char* f2f_last_error_message(void);
F2F_API const char* f2f_status_name(f2f_status status);
F2F_API const char* f2f_version(void);

/* Progress messages from long-running calls. Pass NULL to silence. */
F2F_API void f2f_set_log_callback(f2f_log_fn fn, void* user);

F2F_API f2f_status f2f_graph_load(const char* path, f2f_graph** out);
/* model is "pa" (param = edges per new node) or "er" (param = edge probability). */
F2F_API f2f_status f2f_graph_generate(const char* model, uint64_t n, double param, uint64_t seed, f2f_graph** out);
/* "pa:N:M", "er:N:P" or a path; returns the giant component. */
F2F_API f2f_status f2f_graph_from_source(const char* source, uint64_t seed, f2f_graph** out);
F2F_API f2f_status f2f_graph_giant_component(const f2f_graph* g, f2f_graph** out);
F2F_API uint64_t f2f_graph_node_count(const f2f_graph* g);
F2F_API uint64_t f2f_graph_edge_count(const f2f_graph* g);
F2F_API f2f_status f2f_graph_stats_get(const f2f_graph* g, f2f_graph_stats* out);
/* Writes a header line and one stats row. */
F2F_API f2f_status f2f_graph_stats_write_csv(const f2f_graph* g, const char* path);
F2F_API void f2f_graph_free(f2f_graph* g);

F2F_API f2f_status f2f_scenario_create(f2f_scenario** out);
/* Keys match the CLI flags without dashes, e.g. "gamma", "strategy", "attacker-edges". */
F2F_API f2f_status f2f_scenario_set(f2f_scenario* s, const char* key, const char* value);
/* "key = value" lines; '#' starts a comment. */
F2F_API f2f_status f2f_scenario_load_config(f2f_scenario* s, const char* path);
F2F_API f2f_status f2f_scenario_run(const f2f_scenario* s, f2f_result** out);
/* Runs on an already loaded graph instead of the scenario's graph source. */
F2F_API f2f_status f2f_scenario_run_on(const f2f_scenario* s, const f2f_graph* g, f2f_result** out);
F2F_API void f2f_scenario_free(f2f_scenario* s);

F2F_API f2f_status f2f_result_create(f2f_result** out);
F2F_API uint64_t f2f_result_row_count(const f2f_result* r);
F2F_API f2f_status f2f_result_row(const f2f_result* r, uint64_t index, f2f_metric_row* out);
/* Moves all rows of src to the end of dst; src stays valid and empty. */
F2F_API f2f_status f2f_result_append(f2f_result* dst, f2f_result* src);
F2F_API f2f_status f2f_result_write_csv(const f2f_result* r, const char* path);
F2F_API void f2f_result_free(f2f_result* r);

/* Builds the scenario's trees on run 0 and writes "tree node parent level" lines. */
F2F_API f2f_status f2f_trees_dump(const f2f_scenario* s, const char* path);
/* Writes the binary return address of `node` in `tree` (run 0 of the scenario). */
F2F_API f2f_status f2f_address_export(const f2f_scenario* s, uint64_t node, uint64_t tree, const char* path);

#ifdef __cplusplus
}
#endif

#endif
