#include "proxytally/preprocess.hpp"

#include <algorithm>
#include <deque>

namespace proxytally {

std::vector<std::string> SimplifiedGraph::node_order() const
{
    std::vector<std::string> ids;
    ids.reserve(graph.node_count());
    for (const auto &n : graph.nodes())
        ids.push_back(n.id);
    return ids;
}

DelegationGraph strip_voter_edges(const DelegationGraph &graph)
{
    std::vector<Edge> kept;
    kept.reserve(graph.edge_count());
    for (const auto &e : graph.edges()) {
        if (!graph.is_voter(e.from))
            kept.push_back(e);
    }
    return DelegationGraph::assemble({graph.nodes().begin(), graph.nodes().end()}, std::move(kept),
                                     graph.weight_mode());
}

SimplifiedGraph prune_unreachable(const DelegationGraph &graph)
{
    const std::size_t n = graph.node_count();

    // reversed adjacency in CSR form: for each node, the sources delegating to it
    std::vector<std::size_t> in_offsets(n + 1, 0);
    for (const auto &e : graph.edges())
        ++in_offsets[e.to + 1];
    for (std::size_t i = 0; i < n; ++i)
        in_offsets[i + 1] += in_offsets[i];
    std::vector<std::uint32_t> in_sources(graph.edge_count());
    {
        auto cursor = in_offsets;
        for (const auto &e : graph.edges())
            in_sources[cursor[e.to]++] = e.from;
    }

    std::vector<bool> reached(n, false);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (graph.is_voter(i)) {
            reached[i] = true;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (std::size_t k = in_offsets[v]; k < in_offsets[v + 1]; ++k) {
            const auto u = in_sources[k];
            if (!reached[u]) {
                reached[u] = true;
                queue.push_back(u);
            }
        }
    }

    SimplifiedGraph out;
    std::vector<std::uint32_t> remap(n, 0);
    std::vector<Node> nodes;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (reached[i]) {
            remap[i] = static_cast<std::uint32_t>(nodes.size());
            nodes.push_back(graph.node(i));
        } else {
            out.report.removed_nodes.push_back(graph.id(i));
        }
    }
    out.report.retained_count = nodes.size();

    const bool equal_split = graph.weight_mode() == WeightMode::EqualSplit;
    std::vector<Edge> edges;
    edges.reserve(graph.edge_count());
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto out_edges = graph.out_edges(i);
        std::size_t survivors = 0;
        for (const auto &e : out_edges) {
            if (reached[i] && reached[e.to])
                ++survivors;
            else
                out.report.removed_edges.emplace_back(graph.id(e.from), graph.id(e.to));
        }
        if (!reached[i] || survivors == 0)
            continue;
        const bool lost_some = survivors != out_edges.size();
        for (const auto &e : out_edges) {
            if (!reached[e.to])
                continue;
            const double w = equal_split ? 1.0 / static_cast<double>(survivors) : e.weight;
            edges.push_back({remap[i], remap[e.to], w});
        }
        if (lost_some) {
            if (equal_split)
                out.warnings.push_back({"REDISTRIBUTED", graph.id(i),
                                        "vote re-split over the delegates that reach a voter"});
            else
                out.warnings.push_back({"PARTIAL_WASTE", graph.id(i),
                                        "part of the outgoing weight points at nodes that never reach a voter"});
        }
    }
    std::sort(out.report.removed_edges.begin(), out.report.removed_edges.end());

    out.graph = DelegationGraph::assemble(std::move(nodes), std::move(edges), graph.weight_mode());
    return out;
}

SimplifiedGraph preprocess(const DelegationGraph &graph)
{
    if (graph.voter_count() == 0)
        throw Error(ErrorCode::EmptyResult, "no voters: every vote would be wasted");

    auto stripped = strip_voter_edges(graph);
    auto result = prune_unreachable(stripped);
    for (const auto &e : graph.edges()) {
        if (graph.is_voter(e.from))
            result.report.stripped_edges.emplace_back(graph.id(e.from), graph.id(e.to));
    }
    return result;
}

} // namespace proxytally
