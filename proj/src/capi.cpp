#include "proxytally/proxytally.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "proxytally/io.hpp"
#include "proxytally/pipeline.hpp"

struct pt_graph {
    proxytally::DelegationGraph graph;
};

struct pt_report {
    proxytally::TallyReport report;
    std::vector<std::string> voter_ids;
};

namespace {

using namespace proxytally;

thread_local std::string last_error;

pt_status status_of(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ParseError: return PT_ERR_PARSE;
    case ErrorCode::EmptyResult: return PT_ERR_EMPTY_RESULT;
    case ErrorCode::SingularSystem: return PT_ERR_SINGULAR_SYSTEM;
    case ErrorCode::NoConvergence: return PT_ERR_NO_CONVERGENCE;
    case ErrorCode::NotAVoter: return PT_ERR_NOT_A_VOTER;
    case ErrorCode::UnknownNode: return PT_ERR_UNKNOWN_NODE;
    case ErrorCode::TooLarge: return PT_ERR_TOO_LARGE;
    case ErrorCode::InvalidArgument: return PT_ERR_INVALID_ARGUMENT;
    default: return PT_ERR_VALIDATION;
    }
}

pt_status fail(pt_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

template <typename F>
pt_status guarded(F &&body) noexcept
{
    try {
        last_error.clear();
        return body();
    } catch (const ValidationError &e) {
        return fail(PT_ERR_VALIDATION, e.what());
    } catch (const Error &e) {
        return fail(status_of(e.code()), std::string{to_string(e.code())} + ": " + e.what());
    } catch (const std::bad_alloc &) {
        return fail(PT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(PT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PT_ERR_INTERNAL, "unknown failure");
    }
}

char *copy_string(const std::string &s)
{
    auto *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

InputFormat input_format(const char *data, size_t len, pt_format format)
{
    switch (format) {
    case PT_FORMAT_JSON: return InputFormat::Json;
    case PT_FORMAT_EDGELIST: return InputFormat::EdgeList;
    case PT_FORMAT_AUTO: return detect_format({data, len});
    }
    throw Error(ErrorCode::InvalidArgument, "unknown input format");
}

PipelineOptions to_options(const pt_options *o)
{
    pt_options defaults;
    pt_options_init(&defaults);
    if (!o)
        o = &defaults;
    PipelineOptions opts;
    if (!(o->tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    opts.solver.tolerance = o->tol;
    switch (o->method) {
    case PT_METHOD_AUTO: opts.solver.method = MethodChoice::Auto; break;
    case PT_METHOD_DIRECT: opts.solver.method = MethodChoice::Direct; break;
    case PT_METHOD_NEUMANN: opts.solver.method = MethodChoice::Neumann; break;
    default: throw Error(ErrorCode::InvalidArgument, "unknown solver method");
    }
    if (o->max_iter != 0)
        opts.solver.max_iterations = o->max_iter;
    opts.solver.dense_threshold = o->dense_threshold;
    opts.decay.beta = o->decay;
    check_decay(opts.decay);
    opts.exact = o->exact != 0;
    opts.debug_s = o->debug_s != 0;
    if (o->attributions)
        opts.attributions = AttributionRequest::parse(o->attributions);
    return opts;
}

#define PT_REQUIRE(cond, what)                                                                          \
    do {                                                                                                \
        if (!(cond))                                                                                    \
            return fail(PT_ERR_INVALID_ARGUMENT, what);                                                 \
    } while (0)

} // namespace

extern "C" {

const char *pt_version(void)
{
    return "1.0.0";
}

const char *pt_status_name(pt_status status)
{
    switch (status) {
    case PT_OK: return "OK";
    case PT_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case PT_ERR_PARSE: return "PARSE_ERROR";
    case PT_ERR_VALIDATION: return "VALIDATION_ERROR";
    case PT_ERR_EMPTY_RESULT: return "EMPTY_RESULT";
    case PT_ERR_SINGULAR_SYSTEM: return "SINGULAR_SYSTEM";
    case PT_ERR_NO_CONVERGENCE: return "NO_CONVERGENCE";
    case PT_ERR_NOT_A_VOTER: return "NOT_A_VOTER";
    case PT_ERR_UNKNOWN_NODE: return "UNKNOWN_NODE";
    case PT_ERR_TOO_LARGE: return "TOO_LARGE";
    case PT_ERR_INTERNAL: return "INTERNAL";
    }
    return "UNKNOWN";
}

const char *pt_last_error(void)
{
    return last_error.c_str();
}

void pt_options_init(pt_options *options)
{
    if (!options)
        return;
    options->tol = kDefaultTolerance;
    options->method = PT_METHOD_AUTO;
    options->decay = 1.0;
    options->max_iter = 0;
    options->dense_threshold = kDefaultDenseThreshold;
    options->exact = 0;
    options->debug_s = 0;
    options->attributions = nullptr;
}

void pt_string_free(char *s)
{
    std::free(s);
}

pt_status pt_graph_parse(const char *data, size_t len, pt_format format, pt_graph **out)
{
    PT_REQUIRE(out, "output handle pointer is NULL");
    *out = nullptr;
    PT_REQUIRE(data || len == 0, "input data is NULL");
    return guarded([&] {
        const std::string_view text{data ? data : "", len};
        auto g = std::make_unique<pt_graph>();
        g->graph = parse_input(text, input_format(data, len, format));
        *out = g.release();
        return PT_OK;
    });
}

void pt_graph_free(pt_graph *graph)
{
    delete graph;
}

size_t pt_graph_node_count(const pt_graph *graph)
{
    return graph ? graph->graph.node_count() : 0;
}

size_t pt_graph_edge_count(const pt_graph *graph)
{
    return graph ? graph->graph.edge_count() : 0;
}

pt_status pt_graph_emit(const pt_graph *graph, pt_format format, char **out)
{
    PT_REQUIRE(graph && out, "NULL argument");
    PT_REQUIRE(format == PT_FORMAT_JSON || format == PT_FORMAT_EDGELIST, "output format must be JSON or EDGELIST");
    *out = nullptr;
    return guarded([&] {
        *out = copy_string(emit_graph(graph->graph, format == PT_FORMAT_JSON ? InputFormat::Json
                                                                             : InputFormat::EdgeList));
        return PT_OK;
    });
}

pt_status pt_graph_dot(const pt_graph *graph, const pt_options *options, char **out)
{
    PT_REQUIRE(graph && out, "NULL argument");
    *out = nullptr;
    return guarded([&] {
        const auto opts = to_options(options);
        *out = copy_string(to_dot(prepare(graph->graph, opts.decay)));
        return PT_OK;
    });
}

pt_status pt_check(const char *data, size_t len, pt_format format, char **report_json)
{
    PT_REQUIRE(report_json, "output pointer is NULL");
    *report_json = nullptr;
    PT_REQUIRE(data || len == 0, "input data is NULL");
    return guarded([&] {
        const std::string_view text{data ? data : "", len};
        const auto spec = parse_spec(text, input_format(data, len, format));
        try {
            const auto graph = build_graph(spec);
            const auto report = validate(graph);
            *report_json = copy_string(to_json(report));
            return report.ok() ? PT_OK : fail(PT_ERR_VALIDATION, "graph failed validation");
        } catch (const ValidationError &e) {
            *report_json = copy_string(to_json(e.report()));
            return fail(PT_ERR_VALIDATION, e.what());
        }
    });
}

pt_status pt_solve(const pt_graph *graph, const pt_options *options, pt_report **out)
{
    PT_REQUIRE(graph && out, "NULL argument");
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<pt_report>();
        r->report = run_tally(graph->graph, to_options(options));
        for (const auto &[id, v] : r->report.voter_tallies)
            r->voter_ids.push_back(id);
        *out = r.release();
        return PT_OK;
    });
}

void pt_report_free(pt_report *report)
{
    delete report;
}

size_t pt_report_voter_count(const pt_report *report)
{
    return report ? report->voter_ids.size() : 0;
}

pt_status pt_report_voter(const pt_report *report, size_t index, const char **id, double *votes)
{
    PT_REQUIRE(report, "NULL report");
    PT_REQUIRE(index < report->voter_ids.size(), "voter index out of range");
    const auto &name = report->voter_ids[index];
    if (id)
        *id = name.c_str();
    if (votes)
        *votes = report->report.voter_tallies.at(name);
    return PT_OK;
}

pt_status pt_report_json(const pt_report *report, char **out)
{
    PT_REQUIRE(report && out, "NULL argument");
    *out = nullptr;
    return guarded([&] {
        *out = copy_string(to_json(report->report));
        return PT_OK;
    });
}

pt_status pt_report_csv(const pt_report *report, char **out)
{
    PT_REQUIRE(report && out, "NULL argument");
    *out = nullptr;
    return guarded([&] {
        *out = copy_string(to_csv(report->report));
        return PT_OK;
    });
}

pt_status pt_explain(const pt_graph *graph, const pt_options *options, const char *voter, char **out)
{
    PT_REQUIRE(graph && voter && out, "NULL argument");
    *out = nullptr;
    return guarded([&] {
        const auto opts = to_options(options);
        const auto sg = prepare(graph->graph, opts.decay);
        *out = copy_string(to_json(attribution_for_voter(sg, voter, opts.solver)));
        return PT_OK;
    });
}

pt_status pt_whatif(const pt_graph *graph, const pt_options *options, const char *node, double *votes,
                    char **json)
{
    PT_REQUIRE(graph && node, "NULL argument");
    if (json)
        *json = nullptr;
    return guarded([&] {
        const auto opts = to_options(options);
        const double v = hypothetical_tally(graph->graph, node, opts.solver, opts.decay);
        if (votes)
            *votes = v;
        if (json)
            *json = copy_string(hypothetical_json(node, v));
        return PT_OK;
    });
}

} // extern "C"
