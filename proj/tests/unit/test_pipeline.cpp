#include <doctest.h>

#include <json.hpp>

#include "proxytally/pipeline.hpp"
#include "test_support.hpp"

using namespace proxytally;

TEST_CASE("tally report for the example")
{
    const auto r = run_tally(test::figure1());
    CHECK(r.retained == 24);
    CHECK(r.wasted_nodes == std::vector<std::string>{"B"});
    CHECK(r.voter_tallies.size() == 12);
    CHECK(r.conservation_check.pass);
    CHECK(r.conservation_check.lossless);
    CHECK(r.conservation_check.expected == 24.0);
    CHECK(r.conservation_check.actual == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(r.decay_loss == 0.0);
    CHECK(r.solver.method == "DIRECT");
    CHECK(r.solver.residual <= 1e-10);
    CHECK(r.warnings.empty());
    CHECK_FALSE(r.attributions);
    CHECK_FALSE(r.raw_s);
    CHECK_FALSE(r.exact_tallies);

    const auto doc = nlohmann::json::parse(to_json(r));
    CHECK(doc["voter_tallies"]["X"] == 3.0);
    CHECK(doc["conservation_check"]["kind"] == "equality");
    CHECK(doc["wasted_nodes"] == nlohmann::json::array({"B"}));
    CHECK_FALSE(doc.contains("raw_solver_output_s"));
}

TEST_CASE("pipeline options")
{
    const auto g = test::figure1();
    SUBCASE("exact fractions")
    {
        PipelineOptions o;
        o.exact = true;
        const auto r = run_tally(g, o);
        REQUIRE(r.exact_tallies);
        CHECK(r.exact_tallies->at("M") == "8/3");
        CHECK(r.exact_tallies->at("K") == "5/3");
        CHECK(r.exact_tallies->at("A") == "1/1");
        CHECK(r.solver.method == "EXACT");
        const auto doc = nlohmann::json::parse(to_json(r));
        CHECK(doc["voter_tallies"]["S"] == "7/3");
        CHECK(to_csv(r).find("S,7/3\n") != std::string::npos);
    }
    SUBCASE("decay reports the loss")
    {
        PipelineOptions o;
        o.decay.beta = 0.5;
        const auto r = run_tally(g, o);
        CHECK(r.decay_loss > 0.0);
        CHECK(r.decay_loss == doctest::Approx(24.0 - r.conservation_check.actual));
        CHECK(r.conservation_check.pass);
        CHECK_FALSE(r.conservation_check.lossless);
        CHECK(nlohmann::json::parse(to_json(r))["conservation_check"]["kind"] == "upper_bound");

        o.exact = true;
        const auto e = run_tally(g, o);
        for (const auto &[id, v] : r.voter_tallies)
            CHECK(e.voter_tallies.at(id) == doctest::Approx(v).epsilon(1e-12));
    }
    SUBCASE("bad decay")
    {
        PipelineOptions o;
        o.decay.beta = 0.0;
        CHECK_THROWS_AS(run_tally(g, o), Error);
    }
    SUBCASE("raw solver output is labelled")
    {
        PipelineOptions o;
        o.debug_s = true;
        const auto r = run_tally(g, o);
        REQUIRE(r.raw_s);
        CHECK(r.raw_s->size() == 24);
        CHECK(r.raw_s->at("O") == doctest::Approx(7.0 / 3));
        const auto doc = nlohmann::json::parse(to_json(r));
        CHECK(doc["raw_solver_output_s"]["note"].get<std::string>().find("NOT") != std::string::npos);
    }
    SUBCASE("attributions")
    {
        PipelineOptions o;
        o.attributions = AttributionRequest::parse("all");
        auto r = run_tally(g, o);
        REQUIRE(r.attributions);
        CHECK(r.attributions->size() == 12);
        CHECK(r.attributions->at("X").contributions.at("T") == doctest::Approx(0.5));

        o.attributions = AttributionRequest::parse("K,X");
        r = run_tally(g, o);
        CHECK(r.attributions->size() == 2);
        CHECK(r.attributions->at("K").total == doctest::Approx(5.0 / 3));

        o.attributions = AttributionRequest::parse("T");
        CHECK_THROWS_AS(run_tally(g, o), Error);
        CHECK_THROWS_AS(AttributionRequest::parse("K,,X"), Error);
        CHECK(AttributionRequest::parse("none").scope == AttributionRequest::Scope::None);
    }
    SUBCASE("Neumann forced")
    {
        PipelineOptions o;
        o.solver.method = MethodChoice::Neumann;
        const auto r = run_tally(g, o);
        CHECK(r.solver.method == "NEUMANN");
        CHECK(r.solver.iterations > 0);
        CHECK(r.voter_tallies.at("X") == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("report rounding")
{
    CHECK(round_significant(8.0 / 3) == 2.66666666667);
    CHECK(round_significant(0.1 + 0.2) == 0.3);
    CHECK(round_significant(0.0) == 0.0);
    CHECK(round_significant(123456789012345.0) == 123456789012000.0);
}

TEST_CASE("validation report json")
{
    const auto doc = nlohmann::json::parse(to_json(validate(test::figure1())));
    CHECK(doc["valid"] == true);
    CHECK(doc["errors"].empty());
    CHECK(nlohmann::json::parse(hypothetical_json("O", 1.75))["hypothetical_tally"] == 1.75);
}
