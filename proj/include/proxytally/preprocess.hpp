#pragma once

#include <string>
#include <utility>
#include <vector>

#include "proxytally/graph.hpp"

namespace proxytally {

struct PruneReport {
    /// Nodes whose vote can never reach a voter, sorted.
    std::vector<std::string> removed_nodes;
    /// Edges dropped because they touch a removed node, sorted.
    std::vector<std::pair<std::string, std::string>> removed_edges;
    /// Voter out-edges dropped before pruning (filled by preprocess()).
    std::vector<std::pair<std::string, std::string>> stripped_edges;
    std::size_t retained_count = 0;
};

/// Preprocessed graph: no voter has out-edges and every retained non-voter
/// reaches some voter. Node indices of `graph` are the solver row order.
struct SimplifiedGraph {
    DelegationGraph graph;
    PruneReport report;
    /// PARTIAL_WASTE (explicit weights pointing into the pruned region) and
    /// REDISTRIBUTED (equal-split sources re-split over surviving delegates).
    std::vector<Issue> warnings;

    std::vector<std::string> node_order() const;
};

/// Drops every edge whose source votes.
DelegationGraph strip_voter_edges(const DelegationGraph &graph);

/// Keeps exactly the nodes from which a voter is reachable (reverse BFS from
/// the voter set). Equal-split sources that lost delegates are re-split over
/// the survivors; explicit weights are kept and the lost share is reported.
SimplifiedGraph prune_unreachable(const DelegationGraph &graph);

/// prune_unreachable(strip_voter_edges(graph)). Throws EmptyResult when the
/// graph has no voters.
SimplifiedGraph preprocess(const DelegationGraph &graph);

} // namespace proxytally
