#include "proxytally/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace proxytally {

namespace {

std::string edge_label(std::string_view from, std::string_view to)
{
    std::string s{from};
    s += "->";
    s += to;
    return s;
}

void add_error(ValidationReport &report, ErrorCode code, std::string element, std::string message)
{
    report.errors.push_back({std::string{to_string(code)}, std::move(element), std::move(message)});
}

ErrorCode code_from_string(std::string_view code)
{
    for (auto c : {ErrorCode::DuplicateNode, ErrorCode::DuplicateEdge, ErrorCode::SelfLoop,
                   ErrorCode::UnknownEndpoint, ErrorCode::WeightOutOfRange,
                   ErrorCode::WeightSumExceedsOne, ErrorCode::MixedWeightMode,
                   ErrorCode::InvalidNodeId, ErrorCode::EqualSplitMismatch}) {
        if (to_string(c) == code)
            return c;
    }
    return ErrorCode::InvalidArgument;
}

std::string summarize(const ValidationReport &report)
{
    std::string msg = "invalid delegation graph:";
    for (const auto &e : report.errors) {
        msg += "\n  ";
        msg += e.code;
        msg += "(";
        msg += e.element;
        msg += "): ";
        msg += e.message;
    }
    return msg;
}

bool weight_in_range(double w) noexcept
{
    return std::isfinite(w) && w > 0.0 && w <= 1.0;
}

} // namespace

std::string_view to_string(WeightMode mode) noexcept
{
    return mode == WeightMode::EqualSplit ? "EQUAL_SPLIT" : "EXPLICIT";
}

ValidationError::ValidationError(ErrorCode code, ValidationReport report)
    : Error(code, summarize(report)), report_(std::move(report))
{
}

DelegationGraph DelegationGraph::assemble(std::vector<Node> nodes, std::vector<Edge> edges,
                                          WeightMode mode)
{
    DelegationGraph g;
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    std::stable_sort(g.edges_.begin(), g.edges_.end(), [](const Edge &a, const Edge &b) {
        return std::pair{a.from, a.to} < std::pair{b.from, b.to};
    });
    // With no edges both modes describe the same graph; normalize so equality holds.
    g.mode_ = g.edges_.empty() ? WeightMode::EqualSplit : mode;

    const std::size_t n = g.nodes_.size();
    g.out_offsets_.assign(n + 1, 0);
    std::size_t e = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        while (e < g.edges_.size() && g.edges_[e].from < i)
            ++e;
        g.out_offsets_[i] = e;
    }
    // edges whose source is out of range sit past out_offsets_[n] and are only seen by validate()
    return g;
}

std::optional<std::size_t> DelegationGraph::index_of(std::string_view id) const noexcept
{
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const Node &n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id)
        return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::span<const Edge> DelegationGraph::out_edges(std::size_t index) const
{
    if (index >= nodes_.size())
        throw Error(ErrorCode::InvalidArgument, "node index out of range");
    return std::span<const Edge>(edges_).subspan(out_offsets_[index],
                                                 out_offsets_[index + 1] - out_offsets_[index]);
}

double DelegationGraph::out_weight_sum(std::size_t index) const
{
    double sum = 0.0;
    for (const auto &e : out_edges(index))
        sum += e.weight;
    return sum;
}

std::size_t DelegationGraph::voter_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node &n) { return n.is_voter; }));
}

bool DelegationGraph::operator==(const DelegationGraph &other) const noexcept
{
    return mode_ == other.mode_ && nodes_ == other.nodes_ && edges_ == other.edges_;
}

DelegationGraph build_graph(const GraphSpec &spec)
{
    return build_graph(spec.nodes, spec.edges);
}

DelegationGraph build_graph(std::span<const NodeSpec> node_specs, std::span<const EdgeSpec> edge_specs)
{
    ValidationReport report;

    std::vector<Node> nodes;
    nodes.reserve(node_specs.size());
    for (const auto &spec : node_specs) {
        if (spec.id.empty()) {
            add_error(report, ErrorCode::InvalidNodeId, "", "node id must be a nonempty string");
            continue;
        }
        nodes.push_back({spec.id, spec.is_voter});
    }
    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const Node &a, const Node &b) { return a.id < b.id; });
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i].id == nodes[i - 1].id)
            add_error(report, ErrorCode::DuplicateNode, nodes[i].id, "node declared more than once");
    }
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](const Node &a, const Node &b) { return a.id == b.id; }),
                nodes.end());

    auto find = [&](const std::string &id) -> std::optional<std::uint32_t> {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                                   [](const Node &n, const std::string &key) { return n.id < key; });
        if (it == nodes.end() || it->id != id)
            return std::nullopt;
        return static_cast<std::uint32_t>(it - nodes.begin());
    };

    struct Pending {
        std::uint32_t from;
        std::uint32_t to;
        std::optional<double> weight;
    };
    std::vector<Pending> pending;
    pending.reserve(edge_specs.size());
    for (const auto &spec : edge_specs) {
        const auto label = edge_label(spec.from, spec.to);
        const auto from = find(spec.from);
        const auto to = find(spec.to);
        bool ok = true;
        if (!from) {
            add_error(report, ErrorCode::UnknownEndpoint, label, "unknown source node '" + spec.from + "'");
            ok = false;
        }
        if (!to) {
            add_error(report, ErrorCode::UnknownEndpoint, label, "unknown target node '" + spec.to + "'");
            ok = false;
        }
        if (spec.from == spec.to) {
            add_error(report, ErrorCode::SelfLoop, spec.from, "a node cannot delegate to itself");
            ok = false;
        }
        if (spec.weight && !weight_in_range(*spec.weight)) {
            add_error(report, ErrorCode::WeightOutOfRange, label, "weight must lie in (0, 1]");
            ok = false;
        }
        if (ok)
            pending.push_back({*from, *to, spec.weight});
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Pending &a, const Pending &b) {
        return std::pair{a.from, a.to} < std::pair{b.from, b.to};
    });
    {
        std::vector<Pending> unique;
        unique.reserve(pending.size());
        for (const auto &p : pending) {
            if (!unique.empty() && unique.back().from == p.from && unique.back().to == p.to) {
                add_error(report, ErrorCode::DuplicateEdge, edge_label(nodes[p.from].id, nodes[p.to].id),
                          "delegation listed more than once");
                continue;
            }
            unique.push_back(p);
        }
        pending = std::move(unique);
    }

    bool any_weighted = false;
    std::vector<Edge> edges;
    edges.reserve(pending.size());
    for (std::size_t begin = 0; begin < pending.size();) {
        std::size_t end = begin;
        std::size_t weighted = 0;
        while (end < pending.size() && pending[end].from == pending[begin].from) {
            weighted += pending[end].weight.has_value();
            ++end;
        }
        const auto &source = nodes[pending[begin].from].id;
        const std::size_t degree = end - begin;
        if (weighted != 0 && weighted != degree) {
            add_error(report, ErrorCode::MixedWeightMode, source,
                      "weighted and unweighted delegations from the same node");
        } else if (weighted == 0) {
            for (std::size_t i = begin; i < end; ++i)
                edges.push_back({pending[i].from, pending[i].to, 1.0 / static_cast<double>(degree)});
        } else {
            any_weighted = true;
            double sum = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                sum += *pending[i].weight;
                edges.push_back({pending[i].from, pending[i].to, *pending[i].weight});
            }
            if (sum > 1.0 + kWeightSumTolerance)
                add_error(report, ErrorCode::WeightSumExceedsOne, source,
                          "outgoing weights sum to " + std::to_string(sum));
        }
        begin = end;
    }

    if (!report.ok()) {
        const auto code = code_from_string(report.errors.front().code);
        throw ValidationError(code, std::move(report));
    }
    return DelegationGraph::assemble(std::move(nodes), std::move(edges),
                                     any_weighted ? WeightMode::Explicit : WeightMode::EqualSplit);
}

ValidationReport validate(const DelegationGraph &graph)
{
    ValidationReport report;
    const auto nodes = graph.nodes();
    const std::size_t n = nodes.size();

    for (std::size_t i = 0; i < n; ++i) {
        if (nodes[i].id.empty())
            add_error(report, ErrorCode::InvalidNodeId, "", "node id must be a nonempty string");
        if (i > 0 && nodes[i].id == nodes[i - 1].id)
            add_error(report, ErrorCode::DuplicateNode, nodes[i].id, "node declared more than once");
    }

    auto name = [&](std::uint32_t i) { return i < n ? nodes[i].id : "#" + std::to_string(i); };

    const auto edges = graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto &e = edges[k];
        const auto label = edge_label(name(e.from), name(e.to));
        if (e.from >= n || e.to >= n)
            add_error(report, ErrorCode::UnknownEndpoint, label, "edge endpoint is not a node");
        if (e.from == e.to)
            add_error(report, ErrorCode::SelfLoop, name(e.from), "a node cannot delegate to itself");
        if (k > 0 && edges[k - 1].from == e.from && edges[k - 1].to == e.to)
            add_error(report, ErrorCode::DuplicateEdge, label, "delegation listed more than once");
        if (!weight_in_range(e.weight))
            add_error(report, ErrorCode::WeightOutOfRange, label, "weight must lie in (0, 1]");
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto out = graph.out_edges(i);
        if (out.empty())
            continue;
        double sum = 0.0;
        for (const auto &e : out)
            sum += e.weight;
        if (graph.weight_mode() == WeightMode::EqualSplit) {
            const double expected = 1.0 / static_cast<double>(out.size());
            for (const auto &e : out) {
                if (std::abs(e.weight - expected) > 4 * std::numeric_limits<double>::epsilon() * expected)
                    add_error(report, ErrorCode::EqualSplitMismatch, edge_label(nodes[i].id, name(e.to)),
                              "equal-split weight differs from 1/outdegree");
            }
        }
        if (sum > 1.0 + kWeightSumTolerance) {
            add_error(report, ErrorCode::WeightSumExceedsOne, nodes[i].id,
                      "outgoing weights sum to " + std::to_string(sum));
        } else if (sum < 1.0 - kWeightSumTolerance) {
            report.warnings.push_back({"WEIGHT_SUM_BELOW_ONE", nodes[i].id,
                                       "outgoing weights sum to " + std::to_string(sum) +
                                           "; the remainder decays"});
        }
    }
    return report;
}

} // namespace proxytally
