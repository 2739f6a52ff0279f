#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxytally/attribution.hpp"
#include "proxytally/extensions.hpp"
#include "proxytally/graph.hpp"
#include "proxytally/preprocess.hpp"
#include "proxytally/solver.hpp"

namespace proxytally {

/// Reported numbers carry this many significant digits.
inline constexpr int kReportDigits = 12;

struct AttributionRequest {
    enum class Scope { None, All, Selected };

    Scope scope = Scope::None;
    std::vector<std::string> voters;

    /// "none", "all", or a comma-separated list of voter ids.
    static AttributionRequest parse(std::string_view text);
};

struct PipelineOptions {
    SolverConfig solver;
    DecayConfig decay;
    AttributionRequest attributions;
    /// Fraction arithmetic; only for graphs up to kExactNodeLimit nodes.
    bool exact = false;
    /// Include the raw S entries of every retained node, non-voters too.
    bool debug_s = false;
};

struct ConservationCheck {
    double expected = 0.0;
    double actual = 0.0;
    bool pass = false;
    /// True when no vote mass can leak (beta = 1, every retained non-voter's
    /// weights sum to 1); the check is then an equality, otherwise a bound.
    bool lossless = true;
};

struct SolverSummary {
    std::string method;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct TallyReport {
    std::map<std::string, double> voter_tallies;
    /// "p/q" strings when run with exact arithmetic.
    std::optional<std::map<std::string, std::string>> exact_tallies;
    std::size_t retained = 0;
    std::vector<std::string> wasted_nodes;
    ConservationCheck conservation_check;
    double decay_loss = 0.0;
    SolverSummary solver;
    std::optional<std::map<std::string, AttributionVector>> attributions;
    std::vector<Issue> warnings;
    std::optional<std::map<std::string, double>> raw_s;
};

/// preprocess followed by decay.
SimplifiedGraph prepare(const DelegationGraph &graph, const DecayConfig &decay = {});

TallyReport run_tally(const DelegationGraph &graph, const PipelineOptions &options = {});

double round_significant(double value, int digits = kReportDigits);

/// Deterministic JSON (sorted keys, LF, trailing newline).
std::string to_json(const TallyReport &report);
/// `node,votes` header, one row per voter in id order.
std::string to_csv(const TallyReport &report);
std::string to_json(const AttributionVector &attribution);
std::string to_json(const ValidationReport &report);
std::string hypothetical_json(std::string_view node, double votes);

} // namespace proxytally
