#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "proxytally/preprocess.hpp"

namespace proxytally {

using Rational = boost::multiprecision::cpp_rational;

/// Graphs above this size are refused by the exact path.
inline constexpr std::size_t kExactNodeLimit = 200;

/// Simplest fraction that rounds to `x` (continued-fraction expansion); the
/// exact binary value when no short fraction does. 0.5 -> 1/2, 1/3.0 -> 1/3.
Rational rationalize(double x);

/// "p/q" in lowest terms, always with a denominator.
std::string to_fraction_string(const Rational &value);

/// Exact weight of an edge: 1/outdegree in equal-split graphs, rationalize(weight) otherwise.
Rational exact_weight(const DelegationGraph &graph, const Edge &edge);

/**
 * Solves S = J + A S exactly by fraction-valued Gaussian elimination with the
 * edge weights scaled by `decay`. Rows follow the graph's node order. Throws
 * TooLarge above kExactNodeLimit and SingularSystem when B has no inverse.
 */
std::vector<Rational> solve_exact(const DelegationGraph &graph, const Rational &decay = Rational{1});

} // namespace proxytally
