#include "proxytally/attribution.hpp"

#include <algorithm>
#include <cmath>

namespace proxytally {

namespace {

std::size_t voter_index(const SimplifiedGraph &sg, std::string_view voter)
{
    const auto idx = sg.graph.index_of(voter);
    if (!idx) {
        const auto &removed = sg.report.removed_nodes;
        if (std::binary_search(removed.begin(), removed.end(), voter))
            throw Error(ErrorCode::NotAVoter, "'" + std::string{voter} + "' does not vote (its vote is wasted)");
        throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string{voter} + "'");
    }
    if (!sg.graph.is_voter(*idx))
        throw Error(ErrorCode::NotAVoter,
                    "'" + std::string{voter} + "' does not vote; attribution is only meaningful for voters");
    return *idx;
}

AttributionVector to_vector(const SimplifiedGraph &sg, std::size_t voter, const std::vector<double> &row)
{
    AttributionVector v;
    v.voter = sg.graph.id(voter);
    for (std::size_t j = 0; j < row.size(); ++j) {
        v.total += row[j];
        if (std::abs(row[j]) >= kContributionFloor)
            v.contributions.emplace(sg.graph.id(j), row[j]);
    }
    return v;
}

// y = e + A^T y; A^T row j lists the out-delegations of j.
std::vector<double> transpose_neumann(const LinearSystem &sys, std::size_t voter, const SolverConfig &config)
{
    const std::size_t n = sys.size();
    const auto at = sys.delegation.transpose();
    const std::size_t cap = config.max_iterations.value_or(default_max_iterations(n));
    std::vector<double> current(n, 0.0), next(n);
    current[voter] = 1.0;
    for (std::size_t iter = 0; iter < cap; ++iter) {
        at.multiply(current, next);
        next[voter] += 1.0;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            change = std::max(change, std::abs(next[i] - current[i]));
        current.swap(next);
        if (change < config.tolerance)
            return current;
    }
    throw Error(ErrorCode::NoConvergence, "attribution iteration did not converge within " +
                                              std::to_string(cap) + " steps");
}

} // namespace

AttributionVector attribution_for_voter(const SimplifiedGraph &sg, std::string_view voter,
                                        const SolverConfig &config)
{
    const auto idx = voter_index(sg, voter);
    const auto sys = build_system(sg);
    const std::size_t n = sys.size();
    const bool direct = config.method == MethodChoice::Direct ||
                        (config.method == MethodChoice::Auto && n <= config.dense_threshold);
    if (direct) {
        std::vector<double> unit(n, 0.0);
        unit[idx] = 1.0;
        return to_vector(sg, idx, DenseLu::factor_system(sys).solve_transpose(unit));
    }
    return to_vector(sg, idx, transpose_neumann(sys, idx, config));
}

std::vector<AttributionVector> full_attribution_matrix(const SimplifiedGraph &sg, const SolverConfig &config)
{
    const std::size_t n = sg.graph.node_count();
    if (n > config.dense_threshold)
        throw Error(ErrorCode::TooLarge, "full attribution matrix refused for " + std::to_string(n) +
                                             " nodes; query voters individually");
    const auto lu = DenseLu::factor_system(build_system(sg));
    std::vector<AttributionVector> rows;
    std::vector<double> unit(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!sg.graph.is_voter(i))
            continue;
        unit[i] = 1.0;
        rows.push_back(to_vector(sg, i, lu.solve_transpose(unit)));
        unit[i] = 0.0;
    }
    return rows;
}

double hypothetical_tally(const DelegationGraph &graph, std::string_view node, const SolverConfig &config,
                          const DecayConfig &decay)
{
    const auto idx = graph.index_of(node);
    if (!idx)
        throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string{node} + "'");

    std::vector<Node> nodes{graph.nodes().begin(), graph.nodes().end()};
    nodes[*idx].is_voter = true;
    const auto flipped = DelegationGraph::assemble(std::move(nodes), {graph.edges().begin(), graph.edges().end()},
                                                   graph.weight_mode());
    const auto sg = apply_decay(preprocess(flipped), decay);
    return solve(sg, config).votes_of(node);
}

} // namespace proxytally
