#pragma once

#include <stdexcept>
#include <string>

namespace polyflex {

enum class ErrorCode {
    // input / validation
    NonManifoldEdge,
    InconsistentOrientation,
    DegenerateFace,
    IndexOutOfRange,
    ParseError,
    UnsupportedFace,
    InvalidBarycentric,
    InvalidSubdivision,
    DegenerateVertexSet,
    NotRealizable,
    IoError,
    // numerical
    RankGapAmbiguous,
    NoFlexDirection,
    NewtonDivergence,
    GaugeConflict,
    ExtensionInconsistent,
    UnderdeterminedExtension,
    CoplanarApex,
    PredicateFailureExhausted,
    // arguments
    InvalidParameter,
};

/// Exit-code taxonomy: 1 validation, 2 numerical, 3 arguments.
int error_exit_class(ErrorCode code);

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polyflex
