#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proxytally/extensions.hpp"
#include "proxytally/preprocess.hpp"
#include "proxytally/solver.hpp"

namespace proxytally {

/// Contributions below this are reported as absent.
inline constexpr double kContributionFloor = 1e-12;

/// Row `voter` of B^-1: how much of each source's vote ends up with the voter.
struct AttributionVector {
    std::string voter;
    std::map<std::string, double> contributions;
    double total = 0.0;
};

/// Solves B^T y = e_voter. Direct (dense LU) up to the dense threshold,
/// Neumann iteration on A^T above it. Throws NotAVoter for a retained
/// non-voter and UnknownNode for ids absent from the simplified graph.
AttributionVector attribution_for_voter(const SimplifiedGraph &sg, std::string_view voter,
                                        const SolverConfig &config = {});

/// One vector per voter, in node order, from a single factorization.
/// Throws TooLarge above the dense threshold.
std::vector<AttributionVector> full_attribution_matrix(const SimplifiedGraph &sg,
                                                       const SolverConfig &config = {});

/// Votes `node` would receive had it voted itself. Reruns the whole pipeline
/// on the original graph with the node flagged as a voter, since its own
/// delegations disappear and the flow changes.
double hypothetical_tally(const DelegationGraph &graph, std::string_view node,
                          const SolverConfig &config = {}, const DecayConfig &decay = {});

} // namespace proxytally
