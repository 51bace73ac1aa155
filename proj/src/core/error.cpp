#include "core/error.hpp"

namespace polyflex {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
        case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
        case ErrorCode::DegenerateFace: return "DegenerateFace";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnsupportedFace: return "UnsupportedFace";
        case ErrorCode::InvalidBarycentric: return "InvalidBarycentric";
        case ErrorCode::InvalidSubdivision: return "InvalidSubdivision";
        case ErrorCode::DegenerateVertexSet: return "DegenerateVertexSet";
        case ErrorCode::NotRealizable: return "NotRealizable";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::RankGapAmbiguous: return "RankGapAmbiguous";
        case ErrorCode::NoFlexDirection: return "NoFlexDirection";
        case ErrorCode::NewtonDivergence: return "NewtonDivergence";
        case ErrorCode::GaugeConflict: return "GaugeConflict";
        case ErrorCode::ExtensionInconsistent: return "ExtensionInconsistent";
        case ErrorCode::UnderdeterminedExtension: return "UnderdeterminedExtension";
        case ErrorCode::CoplanarApex: return "CoplanarApex";
        case ErrorCode::PredicateFailureExhausted: return "PredicateFailureExhausted";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
    }
    return "UnknownError";
}

int error_exit_class(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonManifoldEdge:
        case ErrorCode::InconsistentOrientation:
        case ErrorCode::DegenerateFace:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::ParseError:
        case ErrorCode::UnsupportedFace:
        case ErrorCode::InvalidBarycentric:
        case ErrorCode::InvalidSubdivision:
        case ErrorCode::DegenerateVertexSet:
        case ErrorCode::NotRealizable:
        case ErrorCode::IoError:
            return 1;
        case ErrorCode::RankGapAmbiguous:
        case ErrorCode::NoFlexDirection:
        case ErrorCode::NewtonDivergence:
        case ErrorCode::GaugeConflict:
        case ErrorCode::ExtensionInconsistent:
        case ErrorCode::UnderdeterminedExtension:
        case ErrorCode::CoplanarApex:
        case ErrorCode::PredicateFailureExhausted:
            return 2;
        case ErrorCode::InvalidParameter:
            return 3;
    }
    return 1;
}

}  // namespace polyflex
