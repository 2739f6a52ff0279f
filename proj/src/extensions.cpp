#include "proxytally/extensions.hpp"

#include <cmath>
#include <vector>

namespace proxytally {

void check_decay(const DecayConfig &cfg)
{
    if (!(std::isfinite(cfg.beta) && cfg.beta > 0.0 && cfg.beta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "decay factor must lie in (0, 1]; got " + std::to_string(cfg.beta));
}

DelegationGraph apply_decay(const DelegationGraph &graph, const DecayConfig &cfg)
{
    check_decay(cfg);
    if (cfg.is_identity())
        return graph;
    std::vector<Edge> edges{graph.edges().begin(), graph.edges().end()};
    for (auto &e : edges)
        e.weight *= cfg.beta;
    return DelegationGraph::assemble({graph.nodes().begin(), graph.nodes().end()}, std::move(edges),
                                     WeightMode::Explicit);
}

SimplifiedGraph apply_decay(const SimplifiedGraph &sg, const DecayConfig &cfg)
{
    SimplifiedGraph out = sg;
    out.graph = apply_decay(sg.graph, cfg);
    return out;
}

DelegationGraph with_explicit_weights(const DelegationGraph &graph, const EdgeWeights &weights)
{
    std::vector<Edge> edges{graph.edges().begin(), graph.edges().end()};
    for (const auto &[key, weight] : weights) {
        const auto &[from, to] = key;
        const auto label = from + "->" + to;
        const auto src = graph.index_of(from);
        const auto dst = graph.index_of(to);
        Edge *target = nullptr;
        if (src && dst) {
            // edges mirror graph.edges(), so out_edges() offsets index into it
            const auto out = graph.out_edges(*src);
            for (std::size_t k = 0; k < out.size(); ++k) {
                if (out[k].to == *dst) {
                    target = &edges[static_cast<std::size_t>(out.data() - graph.edges().data()) + k];
                    break;
                }
            }
        }
        if (!target)
            throw Error(ErrorCode::UnknownEdge, "no delegation " + label + " to reweight");
        if (!(std::isfinite(weight) && weight > 0.0 && weight <= 1.0))
            throw Error(ErrorCode::WeightOutOfRange, "weight of " + label + " must lie in (0, 1]");
        target->weight = weight;
    }

    auto result = DelegationGraph::assemble({graph.nodes().begin(), graph.nodes().end()}, std::move(edges),
                                            WeightMode::Explicit);
    for (std::size_t i = 0; i < result.node_count(); ++i) {
        const double sum = result.out_weight_sum(i);
        if (sum > 1.0 + kWeightSumTolerance)
            throw Error(ErrorCode::WeightSumExceedsOne,
                        "outgoing weights of '" + result.id(i) + "' sum to " + std::to_string(sum));
    }
    return result;
}

} // namespace proxytally
