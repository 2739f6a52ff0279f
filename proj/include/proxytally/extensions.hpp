#pragma once

#include <map>
#include <string>
#include <utility>

#include "proxytally/graph.hpp"
#include "proxytally/preprocess.hpp"

namespace proxytally {

/// Trust decay: every delegation weight is multiplied by beta, so a vote
/// travelling d hops keeps beta^d of its mass. beta = 1 disables it.
struct DecayConfig {
    double beta = 1.0;

    bool is_identity() const noexcept { return beta == 1.0; }
};

/// Throws InvalidArgument unless 0 < beta <= 1.
void check_decay(const DecayConfig &cfg);

/// Scales every edge weight by beta. The result is EXPLICIT, except for
/// beta = 1, which returns the graph unchanged.
DelegationGraph apply_decay(const DelegationGraph &graph, const DecayConfig &cfg);

/// Decay applied to an already preprocessed graph; the prune report is kept.
SimplifiedGraph apply_decay(const SimplifiedGraph &sg, const DecayConfig &cfg);

using EdgeWeights = std::map<std::pair<std::string, std::string>, double>;

/// Replaces the weights of the listed (from, to) edges; unlisted edges keep
/// their current weight. Throws UnknownEdge for a pair that is not an edge,
/// WeightOutOfRange and WeightSumExceedsOne as build_graph does.
DelegationGraph with_explicit_weights(const DelegationGraph &graph, const EdgeWeights &weights);

} // namespace proxytally
