#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/LU>

#include "proxytally/preprocess.hpp"
#include "proxytally/sparse.hpp"

namespace proxytally {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultDenseThreshold = 2000;

enum class SolveMethod { Direct, Neumann };
enum class MethodChoice { Auto, Direct, Neumann };

std::string_view to_string(SolveMethod method) noexcept;

struct SolverConfig {
    MethodChoice method = MethodChoice::Auto;
    double tolerance = kDefaultTolerance;
    /// Neumann iteration cap; unset means 10 n + 1000.
    std::optional<std::size_t> max_iterations;
    std::size_t dense_threshold = kDefaultDenseThreshold;
};

/**
 * The tally system B S = J with B = I - A.
 *
 * Only the delegation matrix A is stored (A[i][k] = weight of k -> i, one
 * entry per edge); B is implied. Row i reads S[i] = 1 + sum_k A[i][k] S[k].
 */
struct LinearSystem {
    CsrMatrix delegation;
    std::vector<double> rhs;
    std::vector<std::string> node_order;
    std::vector<bool> is_voter;

    std::size_t size() const noexcept { return rhs.size(); }

    /// Entry (row, col) of B.
    double system_entry(std::size_t row, std::size_t col) const;
    /// B materialized as a sparse matrix (n + nnz(A) entries).
    CsrMatrix system_matrix() const;
    /// max_i |(B S - J)_i|
    double residual(std::span<const double> solution) const;
};

struct TallyResult {
    /// S: votes per retained node in node order. Only voter entries are final tallies.
    std::vector<double> votes;
    std::vector<std::string> node_order;
    std::map<std::string, double> voter_tallies;
    std::vector<std::string> wasted;
    SolveMethod method = SolveMethod::Direct;
    std::size_t iterations = 0;
    double residual = 0.0;

    double votes_of(std::string_view id) const;
};

LinearSystem build_system(const DelegationGraph &graph);
LinearSystem build_system(const SimplifiedGraph &sg);

/// LU with partial pivoting of a dense n x n matrix (Eigen::PartialPivLU).
class DenseLu {
public:
    /// Factors B = I - A. Throws SingularSystem on a vanishing pivot.
    static DenseLu factor_system(const LinearSystem &sys);

    std::size_t size() const noexcept { return static_cast<std::size_t>(lu_.rows()); }
    std::vector<double> solve(std::span<const double> b) const;
    /// Solves B^T x = b.
    std::vector<double> solve_transpose(std::span<const double> b) const;

private:
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Elimination with partial pivoting; never forms B^-1.
TallyResult solve_direct(const LinearSystem &sys);

/// S(0) = J, S(m+1) = J + A S(m) until successive iterates differ by less
/// than `tolerance` and the residual is below it. Throws NoConvergence after
/// `max_iterations` steps.
TallyResult solve_neumann(const LinearSystem &sys, double tolerance = kDefaultTolerance,
                          std::optional<std::size_t> max_iterations = std::nullopt);

/// Direct up to the dense threshold, Neumann above it, unless forced.
TallyResult solve(const SimplifiedGraph &sg, const SolverConfig &config = {});

std::size_t default_max_iterations(std::size_t n) noexcept;

} // namespace proxytally
