#include "proxytally/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "proxytally/rational.hpp"

namespace proxytally {

namespace {

using nlohmann::json;

double rounded(double v)
{
    return round_significant(v);
}

std::string format_significant(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", kReportDigits, v);
    return buf;
}

// RFC 4180 quoting for ids containing separators or quotes.
std::string csv_field(const std::string &field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

json issues_json(const std::vector<Issue> &issues)
{
    json arr = json::array();
    for (const auto &i : issues)
        arr.push_back({{"code", i.code}, {"element", i.element}, {"message", i.message}});
    return arr;
}

json attribution_json(const AttributionVector &a)
{
    json contributions = json::object();
    for (const auto &[id, v] : a.contributions)
        contributions[id] = rounded(v);
    return {{"voter", a.voter}, {"contributions", std::move(contributions)}, {"total", rounded(a.total)}};
}

bool is_lossless(const SimplifiedGraph &sg)
{
    for (std::size_t i = 0; i < sg.graph.node_count(); ++i) {
        if (sg.graph.is_voter(i))
            continue;
        if (std::abs(sg.graph.out_weight_sum(i) - 1.0) > kWeightSumTolerance)
            return false;
    }
    return true;
}

} // namespace

AttributionRequest AttributionRequest::parse(std::string_view text)
{
    AttributionRequest req;
    if (text.empty() || text == "none")
        return req;
    if (text == "all") {
        req.scope = Scope::All;
        return req;
    }
    req.scope = Scope::Selected;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if (item.empty())
            throw Error(ErrorCode::InvalidArgument, "empty voter id in attribution list");
        req.voters.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
        if (text.empty())
            throw Error(ErrorCode::InvalidArgument, "empty voter id in attribution list");
    }
    return req;
}

SimplifiedGraph prepare(const DelegationGraph &graph, const DecayConfig &decay)
{
    check_decay(decay);
    return apply_decay(preprocess(graph), decay);
}

TallyReport run_tally(const DelegationGraph &graph, const PipelineOptions &options)
{
    check_decay(options.decay);
    const auto base = preprocess(graph);
    const auto sg = apply_decay(base, options.decay);
    const std::size_t n = sg.graph.node_count();

    TallyReport report;
    report.retained = n;
    report.wasted_nodes = sg.report.removed_nodes;
    report.warnings = sg.warnings;

    std::vector<double> votes;
    if (options.exact) {
        const auto exact = solve_exact(base.graph, rationalize(options.decay.beta));
        std::map<std::string, std::string> fractions;
        votes.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            votes.push_back(static_cast<double>(exact[i]));
            if (sg.graph.is_voter(i))
                fractions.emplace(sg.graph.id(i), to_fraction_string(exact[i]));
        }
        report.exact_tallies = std::move(fractions);
        report.solver = {"EXACT", 0, build_system(sg).residual(votes)};
    } else {
        auto result = solve(sg, options.solver);
        report.solver = {std::string{to_string(result.method)}, result.iterations, result.residual};
        votes = std::move(result.votes);
    }

    double voter_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sg.graph.is_voter(i)) {
            report.voter_tallies.emplace(sg.graph.id(i), votes[i]);
            voter_sum += votes[i];
        }
    }

    auto &check = report.conservation_check;
    check.expected = static_cast<double>(n);
    check.actual = voter_sum;
    check.lossless = is_lossless(sg);
    const double slack = 1e-8 * static_cast<double>(n);
    check.pass = check.lossless ? std::abs(voter_sum - check.expected) <= slack
                                : voter_sum <= check.expected + slack;
    report.decay_loss = options.decay.is_identity() ? 0.0 : check.expected - voter_sum;

    if (options.debug_s) {
        std::map<std::string, double> raw;
        for (std::size_t i = 0; i < n; ++i)
            raw.emplace(sg.graph.id(i), votes[i]);
        report.raw_s = std::move(raw);
    }

    using Scope = AttributionRequest::Scope;
    if (options.attributions.scope != Scope::None) {
        std::map<std::string, AttributionVector> rows;
        if (options.attributions.scope == Scope::All && n <= options.solver.dense_threshold) {
            for (auto &a : full_attribution_matrix(sg, options.solver))
                rows.emplace(a.voter, std::move(a));
        } else if (options.attributions.scope == Scope::All) {
            for (std::size_t i = 0; i < n; ++i) {
                if (sg.graph.is_voter(i))
                    rows.emplace(sg.graph.id(i), attribution_for_voter(sg, sg.graph.id(i), options.solver));
            }
        } else {
            for (const auto &id : options.attributions.voters)
                rows.emplace(id, attribution_for_voter(sg, id, options.solver));
        }
        report.attributions = std::move(rows);
    }
    return report;
}

double round_significant(double value, int digits)
{
    if (!std::isfinite(value) || value == 0.0)
        return value;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return std::strtod(buf, nullptr);
}

std::string to_json(const TallyReport &report)
{
    json doc = json::object();
    json tallies = json::object();
    if (report.exact_tallies) {
        for (const auto &[id, v] : *report.exact_tallies)
            tallies[id] = v;
    } else {
        for (const auto &[id, v] : report.voter_tallies)
            tallies[id] = rounded(v);
    }
    doc["voter_tallies"] = std::move(tallies);
    doc["retained"] = report.retained;
    doc["wasted_nodes"] = report.wasted_nodes;
    const auto &c = report.conservation_check;
    doc["conservation_check"] = {{"expected", rounded(c.expected)},
                                 {"actual", rounded(c.actual)},
                                 {"pass", c.pass},
                                 {"kind", c.lossless ? "equality" : "upper_bound"}};
    doc["decay_loss"] = rounded(report.decay_loss);
    doc["solver"] = {{"method", report.solver.method},
                     {"iterations", report.solver.iterations},
                     {"residual", rounded(report.solver.residual)}};
    doc["warnings"] = issues_json(report.warnings);
    if (report.attributions) {
        json rows = json::object();
        for (const auto &[id, a] : *report.attributions)
            rows[id] = attribution_json(a);
        doc["attributions"] = std::move(rows);
    }
    if (report.raw_s) {
        json raw = json::object();
        for (const auto &[id, v] : *report.raw_s)
            raw[id] = rounded(v);
        doc["raw_solver_output_s"] = {
            {"note", "raw S for every retained node; entries of non-voters are NOT what they would receive by voting"},
            {"values", std::move(raw)}};
    }
    return doc.dump(2) + "\n";
}

std::string to_csv(const TallyReport &report)
{
    std::string out = "node,votes\n";
    for (const auto &[id, v] : report.voter_tallies) {
        out += csv_field(id);
        out += ',';
        out += report.exact_tallies ? report.exact_tallies->at(id) : format_significant(v);
        out += '\n';
    }
    return out;
}

std::string to_json(const AttributionVector &attribution)
{
    return attribution_json(attribution).dump(2) + "\n";
}

std::string to_json(const ValidationReport &report)
{
    json doc = {{"valid", report.ok()},
                {"errors", issues_json(report.errors)},
                {"warnings", issues_json(report.warnings)}};
    return doc.dump(2) + "\n";
}

std::string hypothetical_json(std::string_view node, double votes)
{
    json doc = {{"node", std::string{node}}, {"hypothetical_tally", rounded(votes)}};
    return doc.dump(2) + "\n";
}

} // namespace proxytally
