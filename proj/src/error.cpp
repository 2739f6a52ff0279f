#include "proxytally/error.hpp"

namespace proxytally {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DuplicateNode: return "DUPLICATE_NODE";
    case ErrorCode::DuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::SelfLoop: return "SELF_LOOP";
    case ErrorCode::UnknownEndpoint: return "UNKNOWN_ENDPOINT";
    case ErrorCode::WeightOutOfRange: return "WEIGHT_OUT_OF_RANGE";
    case ErrorCode::WeightSumExceedsOne: return "WEIGHT_SUM_EXCEEDS_ONE";
    case ErrorCode::MixedWeightMode: return "MIXED_WEIGHT_MODE";
    case ErrorCode::UnknownEdge: return "UNKNOWN_EDGE";
    case ErrorCode::InvalidNodeId: return "INVALID_NODE_ID";
    case ErrorCode::EqualSplitMismatch: return "EQUAL_SPLIT_MISMATCH";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::EmptyResult: return "EMPTY_RESULT";
    case ErrorCode::SingularSystem: return "SINGULAR_SYSTEM";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::NotAVoter: return "NOT_A_VOTER";
    case ErrorCode::UnknownNode: return "UNKNOWN_NODE";
    case ErrorCode::TooLarge: return "TOO_LARGE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    }
    return "UNKNOWN";
}

} // namespace proxytally
