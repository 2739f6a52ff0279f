#include "proxytally/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace proxytally {

namespace {

class MassPropagation {
public:
    explicit MassPropagation(const DelegationGraph &graph)
        : graph_(graph), totals_(graph.node_count(), 1.0), wave_(graph.node_count(), 1.0),
          incoming_(graph.node_count(), 0.0)
    {
    }

    void round()
    {
        std::fill(incoming_.begin(), incoming_.end(), 0.0);
        for (const auto &e : graph_.edges())
            incoming_[e.to] += e.weight * wave_[e.from];
        wave_.swap(incoming_);
        for (std::size_t i = 0; i < totals_.size(); ++i)
            totals_[i] += wave_[i];
        ++steps_;
    }

    std::size_t steps() const noexcept { return steps_; }
    const std::vector<double> &totals() const noexcept { return totals_; }

private:
    const DelegationGraph &graph_;
    std::vector<double> totals_;
    std::vector<double> wave_;
    std::vector<double> incoming_;
    std::size_t steps_ = 0;
};

} // namespace

std::vector<double> propagate_steps(const DelegationGraph &graph, std::size_t steps)
{
    MassPropagation p{graph};
    while (p.steps() < steps)
        p.round();
    return p.totals();
}

std::vector<double> propagate_steps(const SimplifiedGraph &sg, std::size_t steps)
{
    return propagate_steps(sg.graph, steps);
}

std::vector<double> oracle_tally(const DelegationGraph &graph, double tolerance, std::size_t max_steps)
{
    MassPropagation p{graph};
    std::vector<double> previous = p.totals();
    for (std::size_t target = 1; target <= max_steps; target *= 2) {
        while (p.steps() < target)
            p.round();
        double change = 0.0;
        for (std::size_t i = 0; i < previous.size(); ++i)
            change = std::max(change, std::abs(p.totals()[i] - previous[i]));
        if (!std::isfinite(change))
            break;
        if (change < tolerance)
            return p.totals();
        previous = p.totals();
    }
    throw Error(ErrorCode::NoConvergence,
                "vote mass is never absorbed within " + std::to_string(max_steps) + " propagation steps");
}

std::vector<double> oracle_tally(const SimplifiedGraph &sg, double tolerance, std::size_t max_steps)
{
    return oracle_tally(sg.graph, tolerance, max_steps);
}

} // namespace proxytally
