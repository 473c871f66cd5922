#pragma once

#include <stdexcept>
#include <string>

namespace obslab {

// Stable error identifiers; tests and the CLI dispatch on these rather than
// on message text.
enum class ErrorCode {
    NegativeRealPart,
    NotPSD,
    ZeroEigenvalue,
    DivergentKernel,
    NotInfiniteTimeAdmissible,
    NotHermitian,
    NoConvergence,
    ToleranceNotMet,
    MonotonicityViolation,
    InsufficientModes,
    SquareFunctionFails,
    DeltaZero,
    NoFiniteTau,
    NotExactlyObservable,
    SchemaViolation,
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// Invalid data handed to the library: malformed scenarios, broken invariants,
// ill-formed matrices, bad grids.  CLI exit code 2.
class InputError : public Error {
  public:
    using Error::Error;
};

// An algorithm failed to reach its accuracy target.  CLI exit code 3.
class NumericError : public Error {
  public:
    using Error::Error;
};

// A well-formed request whose mathematical preconditions do not hold
// (certifying a system whose square-function estimate fails, infinite-time
// Gramian of a non-decaying system, ...).  CLI exit code 4.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

} // namespace obslab
