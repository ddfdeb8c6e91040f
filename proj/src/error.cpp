#include "pathdep/error.hpp"

namespace pathdep {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::CycleError: return "CycleError";
        case ErrorCode::DuplicateVertex: return "DuplicateVertex";
        case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::InvalidName: return "InvalidName";
        case ErrorCode::NotSinglyConnected: return "NotSinglyConnected";
        case ErrorCode::SameVertex: return "SameVertex";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::NotOnPath: return "NotOnPath";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::MissingCoefficient: return "MissingCoefficient";
        case ErrorCode::NonpositiveVariance: return "NonpositiveVariance";
        case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
        case ErrorCode::OverlapError: return "OverlapError";
        case ErrorCode::SingularConditioning: return "SingularConditioning";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::EndpointConditioned: return "EndpointConditioned";
        case ErrorCode::OverlappingSets: return "OverlappingSets";
        case ErrorCode::NotRelevant: return "NotRelevant";
        case ErrorCode::NormalizationFailed: return "NormalizationFailed";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::ConformanceFailure: return "ConformanceFailure";
        case ErrorCode::PrecedenceNotEstablished: return "PrecedenceNotEstablished";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace pathdep
