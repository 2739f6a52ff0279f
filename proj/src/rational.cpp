#include "proxytally/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>

namespace proxytally {

namespace {

using boost::multiprecision::cpp_int;

Rational exact_binary_value(double x)
{
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    // 53-bit integer mantissa times a power of two
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Rational value{cpp_int(scaled)};
    if (exponent >= 0)
        value *= Rational{cpp_int(1) << exponent};
    else
        value /= Rational{cpp_int(1) << -exponent};
    return value;
}

} // namespace

Rational rationalize(double x)
{
    if (!std::isfinite(x))
        throw Error(ErrorCode::InvalidArgument, "cannot rationalize a non-finite value");
    if (x == 0.0)
        return Rational{0};
    const bool negative = x < 0.0;
    const double target = std::abs(x);

    // convergents h/k of the continued fraction of `target`
    cpp_int h_prev = 1, h = static_cast<std::int64_t>(std::floor(target));
    cpp_int k_prev = 0, k = 1;
    double rest = target - std::floor(target);
    for (int step = 0; step < 64; ++step) {
        const double approx = static_cast<double>(Rational{h, k});
        if (approx == target)
            return negative ? Rational{-h, k} : Rational{h, k};
        if (rest <= 0.0)
            break;
        const double inv = 1.0 / rest;
        const double digit = std::floor(inv);
        if (digit > 1e15)
            break;
        rest = inv - digit;
        const cpp_int a = static_cast<std::int64_t>(digit);
        cpp_int h_next = a * h + h_prev;
        cpp_int k_next = a * k + k_prev;
        h_prev = std::move(h);
        h = std::move(h_next);
        k_prev = std::move(k);
        k = std::move(k_next);
    }
    const auto exact = exact_binary_value(target);
    return negative ? Rational{-exact} : exact;
}

std::string to_fraction_string(const Rational &value)
{
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
}

Rational exact_weight(const DelegationGraph &graph, const Edge &edge)
{
    if (graph.weight_mode() == WeightMode::EqualSplit)
        return Rational{1, static_cast<std::int64_t>(graph.out_degree(edge.from))};
    return rationalize(edge.weight);
}

std::vector<Rational> solve_exact(const DelegationGraph &graph, const Rational &decay)
{
    const std::size_t n = graph.node_count();
    if (n > kExactNodeLimit)
        throw Error(ErrorCode::TooLarge, "exact arithmetic is limited to " +
                                             std::to_string(kExactNodeLimit) + " nodes; got " +
                                             std::to_string(n));

    // B = I - A stored as sparse rows; row i holds -w(k->i) at column k
    std::vector<std::map<std::size_t, Rational>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
        rows[i][i] = Rational{1};
    for (const auto &e : graph.edges())
        rows[e.to][e.from] -= decay * exact_weight(graph, e);
    std::vector<Rational> rhs(n, Rational{1});

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r) {
            auto it = rows[r].find(col);
            if (it != rows[r].end() && it->second != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot == n)
            throw Error(ErrorCode::SingularSystem,
                        "system matrix is singular; the graph contains a voterless cycle");
        std::swap(rows[pivot], rows[col]);
        std::swap(rhs[pivot], rhs[col]);

        const Rational p = rows[col].at(col);
        for (std::size_t r = col + 1; r < n; ++r) {
            auto it = rows[r].find(col);
            if (it == rows[r].end())
                continue;
            const Rational factor = it->second / p;
            rows[r].erase(it);
            if (factor == 0)
                continue;
            for (const auto &[c, v] : rows[col]) {
                if (c == col)
                    continue;
                auto &slot = rows[r][c];
                slot -= factor * v;
                if (slot == 0)
                    rows[r].erase(c);
            }
            rhs[r] -= factor * rhs[col];
        }
    }

    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc = rhs[i];
        for (const auto &[c, v] : rows[i]) {
            if (c > i)
                acc -= v * x[c];
        }
        x[i] = acc / rows[i].at(i);
    }
    return x;
}

} // namespace proxytally
