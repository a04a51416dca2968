#pragma once

#include <stdexcept>
#include <string>

namespace weldfactor {

// Machine-parsable error codes; the CLI prints these on stderr.
enum class ErrorCode {
    PointOnCurve,
    QuadratureAmbiguous,
    OutOfChart,
    NoConvergence,
    TraceMismatch,
    NonMonotoneInput,
    EmptyList,
    AmbiguousMatch,
    NotBijective,
    ProjectionDefect,
    CannotCertify,
    BoundViolated,
    BadNormalization,
    DomainInvalid,
    ParseError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::PointOnCurve: return "POINT_ON_CURVE";
        case ErrorCode::QuadratureAmbiguous: return "QUADRATURE_AMBIGUOUS";
        case ErrorCode::OutOfChart: return "OUT_OF_CHART";
        case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
        case ErrorCode::TraceMismatch: return "TRACE_MISMATCH";
        case ErrorCode::NonMonotoneInput: return "NON_MONOTONE_INPUT";
        case ErrorCode::EmptyList: return "EMPTY_LIST";
        case ErrorCode::AmbiguousMatch: return "AMBIGUOUS_MATCH";
        case ErrorCode::NotBijective: return "NOT_BIJECTIVE";
        case ErrorCode::ProjectionDefect: return "PROJECTION_DEFECT";
        case ErrorCode::CannotCertify: return "CANNOT_CERTIFY";
        case ErrorCode::BoundViolated: return "BOUND_VIOLATED";
        case ErrorCode::BadNormalization: return "BAD_NORMALIZATION";
        case ErrorCode::DomainInvalid: return "DOMAIN_INVALID";
        case ErrorCode::ParseError: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace weldfactor
