// Runs the proxytally binary and checks stdout, stderr and exit codes.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "test_support.hpp"

#ifndef PROXYTALLY_CLI
#error "PROXYTALLY_CLI must point at the proxytally binary"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("proxytally_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_temp(const std::string &name, const std::string &content)
{
    const auto path = scratch() / name;
    std::ofstream(path, std::ios::binary) << content;
    return path.string();
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Run run(const std::string &args)
{
    const auto err_path = scratch() / "stderr.txt";
    const std::string cmd = std::string{PROXYTALLY_CLI} + " " + args + " 2>" + err_path.string();
    Run r;
    FILE *pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe))
        r.out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    return r;
}

const std::string fig1_json = proxytally::test::fixture_path("fig1.json");
const std::string fig1_list = proxytally::test::fixture_path("fig1.edgelist");

} // namespace

TEST_CASE("solve prints the report")
{
    const auto r = run("solve " + fig1_json);
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.empty());
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["voter_tallies"]["X"] == 3.0);
    CHECK_FALSE(doc["voter_tallies"].contains("H"));
    CHECK(doc["wasted_nodes"] == nlohmann::json::array({"B"}));
    CHECK(doc["conservation_check"]["pass"] == true);
    CHECK(doc["solver"]["method"] == "DIRECT");

    // both input formats give byte-identical output
    CHECK(run("solve " + fig1_list).out == r.out);
    CHECK(run("solve --input-format edgelist " + fig1_list).out == r.out);
}

TEST_CASE("solve options")
{
    const auto csv = run("solve --format csv " + fig1_json);
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("node,votes\nA,1\nD,2\n", 0) == 0);

    const auto exact = run("solve --exact --format csv " + fig1_json);
    CHECK(exact.out.find("M,8/3\n") != std::string::npos);

    const auto neumann = nlohmann::json::parse(run("solve --method neumann --tol 1e-12 " + fig1_json).out);
    CHECK(neumann["solver"]["method"] == "NEUMANN");
    CHECK(neumann["voter_tallies"]["X"] == 3.0);

    const auto decayed = nlohmann::json::parse(run("solve --decay 0.5 " + fig1_json).out);
    CHECK(decayed["decay_loss"].get<double>() > 0.0);

    const auto attr = nlohmann::json::parse(run("solve --attributions K " + fig1_json).out);
    CHECK(attr["attributions"]["K"]["total"] == 1.66666666667);

    const auto debug = nlohmann::json::parse(run("solve --debug-s " + fig1_json).out);
    CHECK(debug["raw_solver_output_s"]["values"]["O"] == 2.33333333333);

    const auto dot_path = (scratch() / "g.dot").string();
    CHECK(run("solve --dot " + dot_path + " " + fig1_json).exit_code == 0);
    CHECK(slurp(dot_path).find("digraph") == 0);
}

TEST_CASE("explain, whatif and check")
{
    const auto x = run("explain --voter X " + fig1_json);
    REQUIRE(x.exit_code == 0);
    const auto doc = nlohmann::json::parse(x.out);
    CHECK(doc["contributions"]["T"] == 0.5);
    CHECK(doc["total"] == 3.0);

    const auto o = run("whatif --node O " + fig1_json);
    REQUIRE(o.exit_code == 0);
    CHECK(nlohmann::json::parse(o.out)["hypothetical_tally"] == 1.75);

    const auto ok = run("check " + fig1_json);
    CHECK(ok.exit_code == 0);
    CHECK(nlohmann::json::parse(ok.out)["valid"] == true);
}

TEST_CASE("input errors exit 1")
{
    const auto not_voter = run("explain --voter T " + fig1_json);
    CHECK(not_voter.exit_code == 1);
    CHECK(not_voter.out.empty());
    CHECK(not_voter.err.find("NOT_A_VOTER") != std::string::npos);

    CHECK(run("whatif --node nobody " + fig1_json).exit_code == 1);

    const auto bad = write_temp("bad.txt", "voter A\nA => B\n");
    const auto parse = run("solve " + bad);
    CHECK(parse.exit_code == 1);
    CHECK(parse.err.find("line 2") != std::string::npos);

    const auto loop = write_temp("loop.txt", "voter A\nnode B\nA -> A\nB -> Z\n");
    const auto check = run("check " + loop);
    CHECK(check.exit_code == 1);
    const auto report = nlohmann::json::parse(check.out);
    CHECK(report["errors"].size() == 2);
    CHECK(run("solve " + loop).exit_code == 1);

    CHECK(run("solve --decay 0 " + fig1_json).exit_code == 1);
    CHECK(run("solve --method magic " + fig1_json).exit_code == 1);
    CHECK(run("solve /nonexistent/graph.json").exit_code == 1);
    CHECK(run("").exit_code == 1);
}

TEST_CASE("solver failures exit 2")
{
    const auto nobody = write_temp("nobody.txt", "node a\nnode b\na -> b\n");
    const auto r = run("solve " + nobody);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("EMPTY_RESULT") != std::string::npos);

    CHECK(run("solve --method direct --dense-threshold 3 " + fig1_json).exit_code == 2);
    CHECK(run("solve --method neumann --max-iter 2 " + fig1_json).exit_code == 2);
}
