// proxytally command-line front end. Talks to the engine only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "proxytally/proxytally.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

int exit_code(pt_status status)
{
    switch (status) {
    case PT_OK: return kExitOk;
    case PT_ERR_INVALID_ARGUMENT:
    case PT_ERR_PARSE:
    case PT_ERR_VALIDATION:
    case PT_ERR_NOT_A_VOTER:
    case PT_ERR_UNKNOWN_NODE: return kExitInput;
    default: return kExitSolver;
    }
}

struct StringDeleter {
    void operator()(char *s) const { pt_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct GraphDeleter {
    void operator()(pt_graph *g) const { pt_graph_free(g); }
};
struct ReportDeleter {
    void operator()(pt_report *r) const { pt_report_free(r); }
};

struct CommonArgs {
    std::string file;
    std::string input_format = "auto";
    double tol = 1e-10;
    std::string method = "auto";
    double decay = 1.0;
    std::size_t max_iter = 0;
    std::size_t dense_threshold = 2000;
    std::string dot_path;
};

struct SolveArgs {
    std::string format = "json";
    std::string attributions = "none";
    bool exact = false;
    bool debug_s = false;
};

int report_failure(pt_status status)
{
    std::cerr << "error: " << pt_status_name(status) << ": " << pt_last_error() << '\n';
    return exit_code(status);
}

std::optional<std::string> read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), {});
}

pt_format to_format(const std::string &name)
{
    if (name == "json")
        return PT_FORMAT_JSON;
    if (name == "edgelist")
        return PT_FORMAT_EDGELIST;
    return PT_FORMAT_AUTO;
}

pt_options to_options(const CommonArgs &args)
{
    pt_options o;
    pt_options_init(&o);
    o.tol = args.tol;
    o.method = args.method == "direct" ? PT_METHOD_DIRECT
               : args.method == "neumann" ? PT_METHOD_NEUMANN
                                          : PT_METHOD_AUTO;
    o.decay = args.decay;
    o.max_iter = args.max_iter;
    o.dense_threshold = args.dense_threshold;
    return o;
}

void add_common(CLI::App *cmd, CommonArgs &args, bool solver_flags)
{
    cmd->add_option("file", args.file, "Delegation graph (JSON or edge list)")->required();
    cmd->add_option("--input-format", args.input_format, "Input format")
        ->check(CLI::IsMember({"auto", "json", "edgelist"}));
    if (!solver_flags)
        return;
    cmd->add_option("--tol", args.tol, "Neumann stopping tolerance (max norm)");
    cmd->add_option("--method", args.method, "Solver selection")
        ->check(CLI::IsMember({"auto", "direct", "neumann"}));
    cmd->add_option("--decay", args.decay, "Trust decay factor beta in (0, 1]");
    cmd->add_option("--max-iter", args.max_iter, "Neumann iteration cap (0: 10 n + 1000)");
    cmd->add_option("--dense-threshold", args.dense_threshold, "Largest graph solved by dense elimination");
    cmd->add_option("--dot", args.dot_path, "Write the simplified graph as Graphviz DOT to this path");
}

/// Loads the graph and writes the optional DOT file. Returns an exit code on failure.
std::optional<int> load(const CommonArgs &args, const pt_options &opts, std::unique_ptr<pt_graph, GraphDeleter> &graph)
{
    const auto text = read_file(args.file);
    if (!text) {
        std::cerr << "error: cannot read '" << args.file << "'\n";
        return kExitInput;
    }
    pt_graph *raw = nullptr;
    if (const auto st = pt_graph_parse(text->data(), text->size(), to_format(args.input_format), &raw); st != PT_OK)
        return report_failure(st);
    graph.reset(raw);

    if (!args.dot_path.empty()) {
        char *dot = nullptr;
        if (const auto st = pt_graph_dot(graph.get(), &opts, &dot); st != PT_OK)
            return report_failure(st);
        OwnedString owned{dot};
        std::ofstream out(args.dot_path, std::ios::binary);
        if (!(out << owned.get())) {
            std::cerr << "error: cannot write '" << args.dot_path << "'\n";
            return kExitInput;
        }
    }
    return std::nullopt;
}

int emit(pt_status status, char *text)
{
    OwnedString owned{text};
    if (status != PT_OK)
        return report_failure(status);
    std::fputs(owned.get(), stdout);
    return kExitOk;
}

int run_solve(const CommonArgs &args, const SolveArgs &solve)
{
    auto opts = to_options(args);
    opts.exact = solve.exact ? 1 : 0;
    opts.debug_s = solve.debug_s ? 1 : 0;
    opts.attributions = solve.attributions.c_str();

    std::unique_ptr<pt_graph, GraphDeleter> graph;
    if (auto rc = load(args, opts, graph))
        return *rc;

    pt_report *raw = nullptr;
    if (const auto st = pt_solve(graph.get(), &opts, &raw); st != PT_OK)
        return report_failure(st);
    std::unique_ptr<pt_report, ReportDeleter> report{raw};

    char *text = nullptr;
    const auto st = solve.format == "csv" ? pt_report_csv(report.get(), &text) : pt_report_json(report.get(), &text);
    return emit(st, text);
}

int run_explain(const CommonArgs &args, const std::string &voter)
{
    const auto opts = to_options(args);
    std::unique_ptr<pt_graph, GraphDeleter> graph;
    if (auto rc = load(args, opts, graph))
        return *rc;
    char *text = nullptr;
    const auto st = pt_explain(graph.get(), &opts, voter.c_str(), &text);
    return emit(st, text);
}

int run_whatif(const CommonArgs &args, const std::string &node)
{
    const auto opts = to_options(args);
    std::unique_ptr<pt_graph, GraphDeleter> graph;
    if (auto rc = load(args, opts, graph))
        return *rc;
    char *text = nullptr;
    const auto st = pt_whatif(graph.get(), &opts, node.c_str(), nullptr, &text);
    return emit(st, text);
}

int run_check(const CommonArgs &args)
{
    const auto text = read_file(args.file);
    if (!text) {
        std::cerr << "error: cannot read '" << args.file << "'\n";
        return kExitInput;
    }
    char *report = nullptr;
    const auto st = pt_check(text->data(), text->size(), to_format(args.input_format), &report);
    OwnedString owned{report};
    if (owned)
        std::fputs(owned.get(), stdout);
    if (st != PT_OK)
        std::cerr << "error: " << pt_status_name(st) << ": " << pt_last_error() << '\n';
    return exit_code(st);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Resolve multi-proxy transitive vote delegation graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pt_version());

    CommonArgs solve_common, explain_common, whatif_common, check_common;
    SolveArgs solve_args;
    std::string voter, node;

    auto *solve = app.add_subcommand("solve", "Tally every voter and report wasted votes");
    add_common(solve, solve_common, true);
    solve->add_option("--format", solve_args.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--attributions", solve_args.attributions, "none, all, or comma-separated voter ids");
    solve->add_flag("--exact", solve_args.exact, "Exact fraction arithmetic (small graphs only)");
    solve->add_flag("--debug-s", solve_args.debug_s, "Also print the raw solver vector for every retained node");

    auto *explain = app.add_subcommand("explain", "Break one voter's tally down by source");
    add_common(explain, explain_common, true);
    explain->add_option("--voter", voter, "Voter id")->required();

    auto *whatif = app.add_subcommand("whatif", "Tally a node would receive if it voted itself");
    add_common(whatif, whatif_common, true);
    whatif->add_option("--node", node, "Node id")->required();

    auto *check = app.add_subcommand("check", "Validate a delegation graph");
    add_common(check, check_common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    if (solve->parsed())
        return run_solve(solve_common, solve_args);
    if (explain->parsed())
        return run_explain(explain_common, voter);
    if (whatif->parsed())
        return run_whatif(whatif_common, node);
    return run_check(check_common);
}
