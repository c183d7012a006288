#include "steklab/params.hpp"

#include <sstream>

#include "steklab/errors.hpp"

namespace steklab {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadDimension: return "BadDimension";
        case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
        case ErrorCode::NonPositive: return "NonPositive";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
        case ErrorCode::BadCount: return "BadCount";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::TooFewFinite: return "TooFewFinite";
        case ErrorCode::ZeroTrace: return "ZeroTrace";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::NonPositiveDeviation: return "NonPositiveDeviation";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

void validate_params(const ProblemParams& params) {
    if (params.n < 2)
        throw Error(ErrorCode::BadDimension, "n must be at least 2, got " +
                                                 std::to_string(params.n));
    const double lower = -1.0 / (params.n - 1);
    if (!(params.sigma > lower && params.sigma < 1.0)) {
        std::ostringstream msg;
        msg << "sigma must lie in (" << lower << ", 1), got " << params.sigma;
        throw Error(ErrorCode::SigmaOutOfRange, msg.str());
    }
    if (!(params.mu > 0.0))
        throw Error(ErrorCode::NonPositive, "mu must be positive, got " +
                                                std::to_string(params.mu));
    if (!(params.l > 0.0))
        throw Error(ErrorCode::NonPositive, "l must be positive, got " +
                                                std::to_string(params.l));
    if (!(params.epsilon > 0.0))
        throw Error(ErrorCode::NonPositive, "epsilon must be positive, got " +
                                                std::to_string(params.epsilon));
}

} // namespace steklab
