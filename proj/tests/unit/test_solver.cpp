#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "proxytally/preprocess.hpp"
#include "proxytally/rational.hpp"
#include "proxytally/solver.hpp"
#include "test_support.hpp"

using namespace proxytally;

namespace {

std::size_t at(const LinearSystem &sys, std::string_view id)
{
    auto it = std::find(sys.node_order.begin(), sys.node_order.end(), id);
    REQUIRE(it != sys.node_order.end());
    return static_cast<std::size_t>(it - sys.node_order.begin());
}

double max_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

LinearSystem chain_system()
{
    // non-voter G2 delegates its whole vote to voter H2
    return build_system(preprocess(build_graph(GraphSpec{{{"G2", false}, {"H2", true}},
                                                         {{"G2", "H2", std::nullopt}}})));
}

} // namespace

TEST_CASE("sparse matrix basics")
{
    const auto m = CsrMatrix::from_triplets(3, 3, {{2, 0, 1.0}, {0, 1, 2.0}, {2, 0, 0.5}, {1, 2, -1.0}});
    CHECK(m.nnz() == 3);
    CHECK(m.at(2, 0) == 1.5);
    CHECK(m.at(0, 1) == 2.0);
    CHECK(m.at(1, 1) == 0.0);

    std::vector<double> x{1.0, 2.0, 3.0}, y(3);
    m.multiply(x, y);
    CHECK(y == std::vector<double>{4.0, -3.0, 1.5});

    const auto t = m.transpose();
    CHECK(t.at(0, 2) == 1.5);
    CHECK(t.at(2, 1) == -1.0);
    CHECK(t.nnz() == 3);

    const auto empty = CsrMatrix::from_triplets(4, 4, {});
    CHECK(empty.nnz() == 0);
    CHECK(empty.row_columns(3).empty());
}

TEST_CASE("build_system transcribes the simplified example")
{
    const auto sys = build_system(preprocess(test::figure1()));
    REQUIRE(sys.size() == 24);
    CHECK(sys.system_entry(at(sys, "D"), at(sys, "C")) == -1.0);
    CHECK(sys.system_entry(at(sys, "I"), at(sys, "H")) == -0.5);
    CHECK(sys.system_entry(at(sys, "K"), at(sys, "I")) == -1.0 / 3.0);
    CHECK(sys.system_entry(at(sys, "T"), at(sys, "U")) == -0.2);
    CHECK(sys.system_entry(at(sys, "X"), at(sys, "Y")) == 0.0);
    for (std::size_t i = 0; i < sys.size(); ++i) {
        CHECK(sys.system_entry(i, i) == 1.0);
        CHECK(sys.rhs[i] == 1.0);
    }
    CHECK(sys.delegation.nnz() == test::figure2_edges().size());
    CHECK(sys.system_matrix().nnz() == 24 + test::figure2_edges().size());

    // the system matches the hand transcription entry for entry
    for (const auto &eq : test::worked_example_equations()) {
        const auto row = at(sys, std::string(1, eq.target));
        double off_diagonal = 0.0;
        for (const auto &[src, coeff] : eq.terms) {
            CHECK(sys.system_entry(row, at(sys, std::string(1, src))) ==
                  doctest::Approx(-static_cast<double>(coeff)).epsilon(1e-15));
            off_diagonal += static_cast<double>(coeff);
        }
        double row_total = 0.0;
        for (double v : sys.delegation.row_values(row))
            row_total += v;
        CHECK(row_total == doctest::Approx(off_diagonal));
    }
}

TEST_CASE("build_system small cases")
{
    SUBCASE("single voter")
    {
        const auto sys = build_system(preprocess(build_graph(GraphSpec{{{"A", true}}, {}})));
        REQUIRE(sys.size() == 1);
        CHECK(sys.system_entry(0, 0) == 1.0);
        CHECK(sys.rhs == std::vector<double>{1.0});
    }
    SUBCASE("one delegation")
    {
        const auto sys = chain_system();
        CHECK(sys.node_order == std::vector<std::string>{"G2", "H2"});
        CHECK(sys.system_entry(0, 0) == 1.0);
        CHECK(sys.system_entry(0, 1) == 0.0);
        CHECK(sys.system_entry(1, 0) == -1.0);
        CHECK(sys.system_entry(1, 1) == 1.0);
        CHECK(sys.rhs == std::vector<double>{1.0, 1.0});
    }
}

TEST_CASE("solve_direct on the example")
{
    const auto r = solve_direct(build_system(preprocess(test::figure1())));
    CHECK(r.method == SolveMethod::Direct);
    CHECK(r.iterations == 0);
    CHECK(r.residual <= 1e-10);

    // blocks printed consistently with the system
    for (const char *id : {"T", "U", "V", "W"})
        CHECK(r.votes_of(id) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.votes_of("X") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.votes_of("Y") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.votes_of("O") == doctest::Approx(7.0 / 3).epsilon(1e-12));
    CHECK(r.votes_of("P") == doctest::Approx(10.0 / 3).epsilon(1e-12));
    CHECK(r.votes_of("Q") == doctest::Approx(8.0 / 3).epsilon(1e-12));
    CHECK(r.votes_of("R") == doctest::Approx(8.0 / 3).epsilon(1e-12));
    CHECK(r.votes_of("S") == doctest::Approx(7.0 / 3).epsilon(1e-12));

    // G-N block: exact solution of the stated system, frozen from the
    // fraction-arithmetic oracle in test_support (H = 1 + G forces H = 2)
    const auto exact = test::solve_equations(test::worked_example_equations());
    const auto eqs = test::worked_example_equations();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        const std::string id(1, eqs[i].target);
        CHECK(r.votes_of(id) == doctest::Approx(static_cast<double>(exact[i])).epsilon(1e-12));
    }
    CHECK(r.votes_of("G") == doctest::Approx(1.0));
    CHECK(r.votes_of("H") == doctest::Approx(2.0));
    CHECK(r.votes_of("I") == doctest::Approx(2.0));
    CHECK(r.votes_of("J") == doctest::Approx(2.0));
    CHECK(r.votes_of("K") == doctest::Approx(5.0 / 3));
    CHECK(r.votes_of("L") == doctest::Approx(5.0 / 3));
    CHECK(r.votes_of("M") == doctest::Approx(8.0 / 3));
    CHECK(r.votes_of("N") == doctest::Approx(2.0));

    CHECK(r.voter_tallies.size() == 12);
    double total = 0.0;
    for (const auto &[id, v] : r.voter_tallies)
        total += v;
    CHECK(total == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("solve_direct single voter and singular input")
{
    const auto one = solve_direct(build_system(preprocess(build_graph(GraphSpec{{{"A", true}}, {}}))));
    CHECK(one.votes == std::vector<double>{1.0});

    const auto cycle = build_graph(GraphSpec{{{"C2", false}, {"D2", false}},
                                             {{"C2", "D2", std::nullopt}, {"D2", "C2", std::nullopt}}});
    try {
        solve_direct(build_system(cycle));
        FAIL("expected SINGULAR_SYSTEM");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::SingularSystem);
    }
}

TEST_CASE("solve_neumann")
{
    const auto sys = build_system(preprocess(test::figure1()));
    SUBCASE("agrees with elimination")
    {
        const auto direct = solve_direct(sys);
        const auto neumann = solve_neumann(sys, 1e-12);
        CHECK(neumann.method == SolveMethod::Neumann);
        CHECK(neumann.iterations > 0);
        CHECK(max_diff(direct.votes, neumann.votes) <= 1e-10);
        CHECK(neumann.votes_of("X") == doctest::Approx(3.0).epsilon(1e-11));
        CHECK(neumann.residual <= 1e-12);
    }
    SUBCASE("without delegations the first iterate is J")
    {
        const auto flat = build_system(preprocess(build_graph(GraphSpec{{{"A", true}, {"B", true}}, {}})));
        const auto r = solve_neumann(flat);
        CHECK(r.votes == std::vector<double>{1.0, 1.0});
        CHECK(r.iterations == 1);
    }
    SUBCASE("voterless cycle never converges")
    {
        const auto cycle = build_graph(GraphSpec{{{"C2", false}, {"D2", false}},
                                                 {{"C2", "D2", std::nullopt}, {"D2", "C2", std::nullopt}}});
        try {
            solve_neumann(build_system(cycle), 1e-10, 5000);
            FAIL("expected NO_CONVERGENCE");
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::NoConvergence);
        }
    }
    SUBCASE("bad tolerance")
    {
        CHECK_THROWS_AS(solve_neumann(sys, 0.0), Error);
    }
}

TEST_CASE("solve selects the method")
{
    const auto sg = preprocess(test::figure1());
    const auto automatic = solve(sg);
    CHECK(automatic.method == SolveMethod::Direct);
    CHECK(automatic.wasted == std::vector<std::string>{"B"});

    SolverConfig neumann;
    neumann.method = MethodChoice::Neumann;
    const auto forced = solve(sg, neumann);
    CHECK(forced.method == SolveMethod::Neumann);
    for (const auto &[id, v] : automatic.voter_tallies)
        CHECK(std::abs(forced.voter_tallies.at(id) - v) <= 1e-9);

    SolverConfig small;
    small.dense_threshold = 10;
    CHECK(solve(sg, small).method == SolveMethod::Neumann);

    small.method = MethodChoice::Direct;
    try {
        solve(sg, small);
        FAIL("expected TOO_LARGE");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}

TEST_CASE("solver properties on random graphs")
{
    std::mt19937_64 rng(7);
    for (int round = 0; round < 60; ++round) {
        test::RandomGraphOptions opt;
        opt.explicit_weights = round % 2 == 0;
        const auto sg = preprocess(build_graph(test::random_spec(rng, opt)));
        const auto sys = build_system(sg);
        const auto direct = solve_direct(sys);
        const auto neumann = solve_neumann(sys, 1e-12);

        CHECK(max_diff(direct.votes, neumann.votes) <= 1e-8);
        CHECK(direct.residual <= 1e-8);
        CHECK(neumann.residual <= 1e-8);
        for (double v : direct.votes)
            CHECK(v >= 1.0 - 1e-12);

        // determinism: bit-identical on rerun
        const auto again = solve_direct(build_system(sg));
        CHECK(std::memcmp(again.votes.data(), direct.votes.data(), direct.votes.size() * sizeof(double)) == 0);
        const auto again_n = solve_neumann(build_system(sg), 1e-12);
        CHECK(std::memcmp(again_n.votes.data(), neumann.votes.data(), neumann.votes.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("dense LU solves transposed systems")
{
    const auto sys = build_system(preprocess(test::figure1()));
    const auto lu = DenseLu::factor_system(sys);
    std::vector<double> b(sys.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        b[i] = static_cast<double>(i % 5) - 1.5;
    const auto x = lu.solve_transpose(b);
    // check B^T x = b directly: (B^T x)_k = x_k - sum_i A[i][k] x_i
    const auto at = sys.delegation.transpose();
    for (std::size_t k = 0; k < x.size(); ++k) {
        double acc = x[k];
        const auto cols = at.row_columns(k);
        const auto vals = at.row_values(k);
        for (std::size_t j = 0; j < cols.size(); ++j)
            acc -= vals[j] * x[cols[j]];
        CHECK(acc == doctest::Approx(b[k]).epsilon(1e-12));
    }
}

TEST_CASE("exact solve")
{
    SUBCASE("matches the hand-built fraction system")
    {
        const auto sg = preprocess(test::figure1());
        const auto exact = solve_exact(sg.graph);
        const auto oracle = test::solve_equations(test::worked_example_equations());
        const auto eqs = test::worked_example_equations();
        for (std::size_t i = 0; i < eqs.size(); ++i)
            CHECK(exact[*sg.graph.index_of(std::string(1, eqs[i].target))] == oracle[i]);
        CHECK(to_fraction_string(exact[*sg.graph.index_of("O")]) == "7/3");
        CHECK(to_fraction_string(exact[*sg.graph.index_of("X")]) == "3/1");
    }
    SUBCASE("decay is applied exactly")
    {
        const auto sg = preprocess(build_graph(GraphSpec{{{"G2", false}, {"H2", true}}, {{"G2", "H2", std::nullopt}}}));
        const auto exact = solve_exact(sg.graph, Rational{1, 2});
        CHECK(exact[1] == Rational{3, 2});
    }
    SUBCASE("refuses large graphs")
    {
        GraphSpec spec;
        for (std::size_t i = 0; i <= kExactNodeLimit; ++i)
            spec.nodes.push_back({"v" + std::to_string(i), true});
        CHECK_THROWS_AS(solve_exact(build_graph(spec)), Error);
    }
    SUBCASE("singular input")
    {
        const auto cycle = build_graph(GraphSpec{{{"C2", false}, {"D2", false}},
                                                 {{"C2", "D2", std::nullopt}, {"D2", "C2", std::nullopt}}});
        CHECK_THROWS_AS(solve_exact(cycle), Error);
    }
}

TEST_CASE("rationalize finds short fractions")
{
    CHECK(rationalize(0.5) == Rational{1, 2});
    CHECK(rationalize(1.0 / 3.0) == Rational{1, 3});
    CHECK(rationalize(0.1) == Rational{1, 10});
    CHECK(rationalize(0.9) == Rational{9, 10});
    CHECK(rationalize(-2.25) == Rational{-9, 4});
    CHECK(rationalize(1.0) == Rational{1});
    CHECK(rationalize(0.0) == Rational{0});
    // every result converts back to the same double
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = dist(rng);
        CHECK(static_cast<double>(rationalize(x)) == x);
    }
}

TEST_CASE("slow contraction is told apart from a stuck iteration")
{
    // Every round, 0.99 of T's mass returns to T through U; X absorbs the rest.
    const auto g = build_graph(GraphSpec{{{"T", false}, {"U", false}, {"X", true}},
                                         {{"T", "U", 0.99}, {"T", "X", 0.01}, {"U", "T", std::nullopt}}});
    const auto sys = build_system(preprocess(g));
    try {
        solve_neumann(sys, 1e-10, 100);
        FAIL("expected NO_CONVERGENCE");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
        CHECK(std::string(e.what()).find("raise max_iter") != std::string::npos);
    }
    const auto r = solve_neumann(sys, 1e-10, 100000);
    CHECK(r.votes_of("X") == doctest::Approx(3.0).epsilon(1e-9));

    const auto cycle = build_graph(GraphSpec{{{"C2", false}, {"D2", false}},
                                             {{"C2", "D2", std::nullopt}, {"D2", "C2", std::nullopt}}});
    try {
        solve_neumann(build_system(cycle), 1e-10, 100);
        FAIL("expected NO_CONVERGENCE");
    } catch (const Error &e) {
        CHECK(std::string(e.what()).find("voterless cycle") != std::string::npos);
    }
}
