#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxytally {

enum class ErrorCode {
    // graph construction / validation
    DuplicateNode,
    DuplicateEdge,
    SelfLoop,
    UnknownEndpoint,
    WeightOutOfRange,
    WeightSumExceedsOne,
    MixedWeightMode,
    UnknownEdge,
    InvalidNodeId,
    EqualSplitMismatch,
    // pipeline
    ParseError,
    EmptyResult,
    SingularSystem,
    NoConvergence,
    NotAVoter,
    UnknownNode,
    TooLarge,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is what
/// callers switch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace proxytally
