#include "proxytally/solver.hpp"

#include <algorithm>
#include <cmath>

namespace proxytally {

namespace {

// B has unit diagonal and off-diagonal entries in [-1, 0]; pivots this small
// only appear when a voterless cycle makes it singular.
constexpr double kPivotFloor = 1e-12;

TallyResult make_result(const LinearSystem &sys, std::vector<double> votes, SolveMethod method,
                        std::size_t iterations)
{
    TallyResult r;
    r.residual = sys.residual(votes);
    r.votes = std::move(votes);
    r.node_order = sys.node_order;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (sys.is_voter[i])
            r.voter_tallies.emplace(sys.node_order[i], r.votes[i]);
    }
    r.method = method;
    r.iterations = iterations;
    return r;
}

} // namespace

std::string_view to_string(SolveMethod method) noexcept
{
    return method == SolveMethod::Direct ? "DIRECT" : "NEUMANN";
}

std::size_t default_max_iterations(std::size_t n) noexcept
{
    return 10 * n + 1000;
}

double LinearSystem::system_entry(std::size_t row, std::size_t col) const
{
    return (row == col ? 1.0 : 0.0) - delegation.at(row, col);
}

CsrMatrix LinearSystem::system_matrix() const
{
    std::vector<Triplet> entries;
    entries.reserve(size() + delegation.nnz());
    for (std::size_t r = 0; r < size(); ++r) {
        entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r), 1.0});
        const auto cols = delegation.row_columns(r);
        const auto vals = delegation.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k)
            entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(cols[k]), -vals[k]});
    }
    return CsrMatrix::from_triplets(size(), size(), std::move(entries));
}

double LinearSystem::residual(std::span<const double> solution) const
{
    std::vector<double> pushed(size());
    delegation.multiply(solution, pushed);
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        worst = std::max(worst, std::abs(solution[i] - pushed[i] - rhs[i]));
    return worst;
}

double TallyResult::votes_of(std::string_view id) const
{
    auto it = std::lower_bound(node_order.begin(), node_order.end(), id);
    if (it == node_order.end() || *it != id)
        throw Error(ErrorCode::UnknownNode, "node '" + std::string{id} + "' is not part of the tally");
    return votes[static_cast<std::size_t>(it - node_order.begin())];
}

LinearSystem build_system(const DelegationGraph &graph)
{
    const std::size_t n = graph.node_count();
    LinearSystem sys;
    std::vector<Triplet> entries;
    entries.reserve(graph.edge_count());
    for (const auto &e : graph.edges())
        entries.push_back({e.to, e.from, e.weight});
    sys.delegation = CsrMatrix::from_triplets(n, n, std::move(entries));
    sys.rhs.assign(n, 1.0);
    sys.node_order.reserve(n);
    sys.is_voter.reserve(n);
    for (const auto &node : graph.nodes()) {
        sys.node_order.push_back(node.id);
        sys.is_voter.push_back(node.is_voter);
    }
    return sys;
}

LinearSystem build_system(const SimplifiedGraph &sg)
{
    return build_system(sg.graph);
}

DenseLu DenseLu::factor_system(const LinearSystem &sys)
{
    const auto n = static_cast<Eigen::Index>(sys.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    b -= Eigen::MatrixXd(sys.delegation.eigen());

    DenseLu f;
    f.lu_.compute(b);
    // PartialPivLU does not refuse singular input; a tiny pivot on U's
    // diagonal is the signal.
    if (n > 0 && f.lu_.matrixLU().diagonal().cwiseAbs().minCoeff() < kPivotFloor)
        throw Error(ErrorCode::SingularSystem, "system matrix is singular; the graph contains a voterless cycle");
    return f;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd &v)
{
    return {v.data(), v.data() + v.size()};
}

} // namespace

std::vector<double> DenseLu::solve(std::span<const double> b) const
{
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    return to_std(lu_.solve(rhs));
}

std::vector<double> DenseLu::solve_transpose(std::span<const double> b) const
{
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    return to_std(lu_.transpose().solve(rhs));
}

TallyResult solve_direct(const LinearSystem &sys)
{
    const auto lu = DenseLu::factor_system(sys);
    return make_result(sys, lu.solve(sys.rhs), SolveMethod::Direct, 0);
}

TallyResult solve_neumann(const LinearSystem &sys, double tolerance, std::optional<std::size_t> max_iterations)
{
    if (!(tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    const std::size_t n = sys.size();
    const std::size_t cap = max_iterations.value_or(default_max_iterations(n));

    std::vector<double> current = sys.rhs;
    std::vector<double> next(n);
    double change = 0.0, previous_change = 0.0;
    for (std::size_t iter = 1; iter <= cap; ++iter) {
        sys.delegation.multiply(current, next);
        previous_change = change;
        change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] += sys.rhs[i];
            change = std::max(change, std::abs(next[i] - current[i]));
        }
        current.swap(next);
        if (!std::isfinite(change))
            break;
        if (change < tolerance && sys.residual(current) <= tolerance)
            return make_result(sys, std::move(current), SolveMethod::Neumann, iter);
    }

    std::string message = "Neumann iteration did not converge within " + std::to_string(cap) + " steps; ";
    const double rate = previous_change > 0.0 ? change / previous_change : 1.0;
    if (std::isfinite(rate) && rate < 1.0 - 1e-9 && change > 0.0) {
        // Slow but contracting: estimate the remaining steps from the last ratio.
        const double remaining = std::ceil(std::log(tolerance / change) / std::log(rate));
        message += "iterates still contract by " + std::to_string(rate) + " per step, about " +
                   std::to_string(static_cast<long long>(remaining)) + " more steps needed; raise max_iter";
    } else {
        message += "iterates are not contracting, which indicates a voterless cycle (input not preprocessed)";
    }
    throw Error(ErrorCode::NoConvergence, message);
}

TallyResult solve(const SimplifiedGraph &sg, const SolverConfig &config)
{
    const auto sys = build_system(sg);
    const std::size_t n = sys.size();

    SolveMethod method = n <= config.dense_threshold ? SolveMethod::Direct : SolveMethod::Neumann;
    if (config.method == MethodChoice::Direct)
        method = SolveMethod::Direct;
    else if (config.method == MethodChoice::Neumann)
        method = SolveMethod::Neumann;

    if (method == SolveMethod::Direct && n > config.dense_threshold)
        throw Error(ErrorCode::TooLarge, "direct solve requested for " + std::to_string(n) +
                                             " nodes; the dense threshold is " +
                                             std::to_string(config.dense_threshold));

    auto result = method == SolveMethod::Direct
                      ? solve_direct(sys)
                      : solve_neumann(sys, config.tolerance, config.max_iterations);
    result.wasted = sg.report.removed_nodes;
    return result;
}

} // namespace proxytally
