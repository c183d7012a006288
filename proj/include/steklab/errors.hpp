#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace steklab {

// ===== error taxonomy =====
//
// Every failure the library can diagnose maps to one code. The code is
// machine-checkable (tests match on it); the message is for humans.

enum class ErrorCode {
    BadDimension,        // ambient dimension outside the supported range
    SigmaOutOfRange,     // Poisson ratio outside (-1/(n-1), 1)
    NonPositive,         // a parameter that must be > 0 is not
    OutOfDomain,         // evaluation point outside the mesh / profile domain
    NonPositiveProfile,  // profile value <= 0 at an evaluation point
    BadCount,            // element / quadrature / eigenvalue count out of range
    NotPositiveDefinite, // Cholesky pivot <= 0 (index() says which)
    SingularSystem,      // linear solve or eigensolve broke down
    TooFewFinite,        // pencil has fewer finite eigenvalues than requested
    ZeroTrace,           // Rayleigh quotient denominator vanishes
    DegenerateFit,       // rate fit has too few points or no spread
    NonPositiveDeviation,// rate fit fed a deviation <= 0
    BadConfig,           // config file is malformed or inconsistent
    IoError,             // file could not be read or written
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    Error(ErrorCode code, const std::string& message, int index)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code), index_(index) {}

    ErrorCode code() const { return code_; }

    // Extra integer payload: the failing pivot for NotPositiveDefinite,
    // unset otherwise.
    std::optional<int> index() const { return index_; }

  private:
    ErrorCode code_;
    std::optional<int> index_;
};

} // namespace steklab
