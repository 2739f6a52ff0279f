/*
 * C interface to the proxytally delegation-graph engine.
 *
 * Objects are opaque handles created and released by the library. Every
 * fallible call returns a pt_status; on failure pt_last_error() describes the
 * problem for the calling thread. Strings returned through char** out
 * parameters are owned by the caller and released with pt_string_free().
 */
#ifndef PROXYTALLY_H
#define PROXYTALLY_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PROXYTALLY_BUILDING)
#    define PT_API __declspec(dllexport)
#  else
#    define PT_API __declspec(dllimport)
#  endif
#else
#  define PT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pt_status {
    PT_OK = 0,
    PT_ERR_INVALID_ARGUMENT = 1,
    PT_ERR_PARSE = 2,
    PT_ERR_VALIDATION = 3,
    PT_ERR_EMPTY_RESULT = 4,
    PT_ERR_SINGULAR_SYSTEM = 5,
    PT_ERR_NO_CONVERGENCE = 6,
    PT_ERR_NOT_A_VOTER = 7,
    PT_ERR_UNKNOWN_NODE = 8,
    PT_ERR_TOO_LARGE = 9,
    PT_ERR_INTERNAL = 10
} pt_status;

typedef enum pt_format {
    PT_FORMAT_JSON = 0,
    PT_FORMAT_EDGELIST = 1,
    PT_FORMAT_AUTO = 2 /* input only: JSON if the text starts with '{' */
} pt_format;

typedef enum pt_method {
    PT_METHOD_AUTO = 0,
    PT_METHOD_DIRECT = 1,
    PT_METHOD_NEUMANN = 2
} pt_method;

typedef struct pt_graph pt_graph;
typedef struct pt_report pt_report;

typedef struct pt_options {
    double tol;             /* Neumann stopping tolerance, default 1e-10 */
    pt_method method;       /* default PT_METHOD_AUTO */
    double decay;           /* beta in (0, 1], default 1 */
    size_t max_iter;        /* 0 selects 10 n + 1000 */
    size_t dense_threshold; /* default 2000 */
    int exact;              /* nonzero: fraction arithmetic, tallies as "p/q" */
    int debug_s;            /* nonzero: include raw S of all retained nodes */
    const char *attributions; /* NULL, "none", "all" or "id1,id2,..." */
} pt_options;

PT_API const char *pt_version(void);
PT_API const char *pt_status_name(pt_status status);
/* Message of the last failure on this thread; never NULL. */
PT_API const char *pt_last_error(void);

PT_API void pt_options_init(pt_options *options);
PT_API void pt_string_free(char *s);

/* Parses and validates a graph. PT_ERR_PARSE on malformed text,
 * PT_ERR_VALIDATION when the graph breaks an invariant. */
PT_API pt_status pt_graph_parse(const char *data, size_t len, pt_format format, pt_graph **out);
PT_API void pt_graph_free(pt_graph *graph);
PT_API size_t pt_graph_node_count(const pt_graph *graph);
PT_API size_t pt_graph_edge_count(const pt_graph *graph);
PT_API pt_status pt_graph_emit(const pt_graph *graph, pt_format format, char **out);
/* DOT rendering of the preprocessed (and decayed) graph. */
PT_API pt_status pt_graph_dot(const pt_graph *graph, const pt_options *options, char **out);

/* Validation only. *report_json receives the JSON report whenever the text
 * parses (status PT_OK or PT_ERR_VALIDATION); it is NULL after PT_ERR_PARSE. */
PT_API pt_status pt_check(const char *data, size_t len, pt_format format, char **report_json);

PT_API pt_status pt_solve(const pt_graph *graph, const pt_options *options, pt_report **out);
PT_API void pt_report_free(pt_report *report);
PT_API size_t pt_report_voter_count(const pt_report *report);
/* *id stays valid until the report is freed. */
PT_API pt_status pt_report_voter(const pt_report *report, size_t index, const char **id, double *votes);
PT_API pt_status pt_report_json(const pt_report *report, char **out);
PT_API pt_status pt_report_csv(const pt_report *report, char **out);

/* Attribution vector of one voter as JSON. */
PT_API pt_status pt_explain(const pt_graph *graph, const pt_options *options, const char *voter, char **out);
/* Tally `node` would receive had it voted. json may be NULL. */
PT_API pt_status pt_whatif(const pt_graph *graph, const pt_options *options, const char *node,
                           double *votes, char **json);

#ifdef __cplusplus
}
#endif

#endif /* PROXYTALLY_H */
