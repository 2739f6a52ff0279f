#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxytally/error.hpp"

namespace proxytally {

/// Outgoing weight sums within this distance of 1 count as exactly 1.
inline constexpr double kWeightSumTolerance = 1e-9;

enum class WeightMode { EqualSplit, Explicit };

std::string_view to_string(WeightMode mode) noexcept;

struct Node {
    std::string id;
    bool is_voter = false;

    bool operator==(const Node &) const = default;
};

/// Edge stored by node index. `from` delegates `weight` of its vote mass to `to`.
struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    double weight = 0.0;

    bool operator==(const Edge &) const = default;
};

/// Input record for build_graph.
struct NodeSpec {
    std::string id;
    bool is_voter = false;
};

/// Input record for build_graph. A missing weight means "equal split".
struct EdgeSpec {
    std::string from;
    std::string to;
    std::optional<double> weight;
};

struct GraphSpec {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
};

struct Issue {
    std::string code;
    std::string element;
    std::string message;

    bool operator==(const Issue &) const = default;
};

struct ValidationReport {
    std::vector<Issue> errors;
    std::vector<Issue> warnings;

    bool ok() const noexcept { return errors.empty(); }
};

/// Thrown by build_graph. code() is the code of the first reported error.
class ValidationError : public Error {
public:
    ValidationError(ErrorCode code, ValidationReport report);

    const ValidationReport &report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/**
 * Immutable delegation graph.
 *
 * Nodes are kept sorted by id (byte order) and edges sorted by (from, to), so
 * two graphs built from the same records in any order compare equal and node
 * indices double as the deterministic row order used by the solvers.
 */
class DelegationGraph {
public:
    DelegationGraph() = default;

    /// Unchecked assembly. `nodes` must already be sorted by id; edges may be
    /// in any order. Use validate() to inspect the result.
    static DelegationGraph assemble(std::vector<Node> nodes, std::vector<Edge> edges,
                                    WeightMode mode);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    WeightMode weight_mode() const noexcept { return mode_; }

    const Node &node(std::size_t index) const { return nodes_.at(index); }
    const std::string &id(std::size_t index) const { return nodes_.at(index).id; }
    bool is_voter(std::size_t index) const { return nodes_.at(index).is_voter; }

    std::optional<std::size_t> index_of(std::string_view id) const noexcept;

    std::span<const Edge> out_edges(std::size_t index) const;
    std::size_t out_degree(std::size_t index) const { return out_edges(index).size(); }
    double out_weight_sum(std::size_t index) const;

    std::size_t voter_count() const noexcept;

    bool operator==(const DelegationGraph &other) const noexcept;

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_;
    WeightMode mode_ = WeightMode::EqualSplit;
};

/// Builds a graph, or throws ValidationError listing every problem found.
/// Without any explicit weight the graph is EQUAL_SPLIT and every edge gets
/// 1/outdegree(from). Sources without explicit weights in an otherwise
/// weighted graph also get 1/outdegree.
DelegationGraph build_graph(std::span<const NodeSpec> nodes, std::span<const EdgeSpec> edges);
DelegationGraph build_graph(const GraphSpec &spec);

/// Reports every invariant violation; never throws.
ValidationReport validate(const DelegationGraph &graph);

} // namespace proxytally
