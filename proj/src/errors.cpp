#include "obslab/errors.hpp"

namespace obslab {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NegativeRealPart: return "NegativeRealPart";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
        case ErrorCode::DivergentKernel: return "DivergentKernel";
        case ErrorCode::NotInfiniteTimeAdmissible: return "NotInfiniteTimeAdmissible";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::InsufficientModes: return "InsufficientModes";
        case ErrorCode::SquareFunctionFails: return "SquareFunctionFails";
        case ErrorCode::DeltaZero: return "DeltaZero";
        case ErrorCode::NoFiniteTau: return "NoFiniteTau";
        case ErrorCode::NotExactlyObservable: return "NotExactlyObservable";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace obslab
