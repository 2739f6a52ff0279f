#pragma once

#include <cstddef>
#include <vector>

#include "proxytally/preprocess.hpp"

namespace proxytally {

/**
 * Brute-force vote-mass propagation, kept free of any matrix code so that it
 * can check the solvers independently.
 *
 * Every node starts holding one vote. Each round, every node pushes
 * weight * (mass it received last round) along each out-edge; voters have no
 * out-edges and simply keep what arrives. The returned totals after `steps`
 * rounds equal sum_{m=0..steps} A^m J.
 */
std::vector<double> propagate_steps(const DelegationGraph &graph, std::size_t steps);
std::vector<double> propagate_steps(const SimplifiedGraph &sg, std::size_t steps);

/// Propagates for 1, 2, 4, ... rounds until two successive totals differ by
/// less than `tolerance` (max norm). Throws NoConvergence past `max_steps`.
std::vector<double> oracle_tally(const DelegationGraph &graph, double tolerance,
                                 std::size_t max_steps = std::size_t{1} << 20);
std::vector<double> oracle_tally(const SimplifiedGraph &sg, double tolerance,
                                 std::size_t max_steps = std::size_t{1} << 20);

} // namespace proxytally
