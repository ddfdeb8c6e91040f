#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathdep {

enum class ErrorCode {
    CycleError,
    DuplicateVertex,
    UnknownEndpoint,
    SelfLoop,
    InvalidName,
    NotSinglyConnected,
    SameVertex,
    Disconnected,
    NotOnPath,
    UnknownVertex,
    MissingCoefficient,
    NonpositiveVariance,
    ZeroCoefficient,
    OverlapError,
    SingularConditioning,
    DomainError,
    EndpointConditioned,
    OverlappingSets,
    NotRelevant,
    NormalizationFailed,
    UnknownKind,
    ConformanceFailure,
    PrecedenceNotEstablished,
    ZeroDenominator,
    NotFound,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (tests, the CLI exit-code mapping, the Python binding) can branch
/// on the kind without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace pathdep
