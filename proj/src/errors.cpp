#include "dlm/errors.hpp"

namespace dlm {

const char* err_name(Err code) {
    switch (code) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NonFiniteValue: return "NonFiniteValue";
    case Err::EmptyInput: return "EmptyInput";
    case Err::MissingColumn: return "MissingColumn";
    case Err::InvalidEnumValue: return "InvalidEnumValue";
    case Err::EmptyJoin: return "EmptyJoin";
    case Err::InfeasibleSplit: return "InfeasibleSplit";
    case Err::EmptyWord: return "EmptyWord";
    case Err::BadOrder: return "BadOrder";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::NonFiniteInput: return "NonFiniteInput";
    case Err::ZeroVariance: return "ZeroVariance";
    case Err::ZeroNorm: return "ZeroNorm";
    case Err::NoPath: return "NoPath";
    case Err::EmptyEvaluation: return "EmptyEvaluation";
    case Err::SingularCovariance: return "SingularCovariance";
    case Err::ClassTooSmall: return "ClassTooSmall";
    case Err::EmptyLabels: return "EmptyLabels";
    case Err::DegenerateCounts: return "DegenerateCounts";
    case Err::PerplexityTooLarge: return "PerplexityTooLarge";
    case Err::NoPairs: return "NoPairs";
    case Err::UnknownFeature: return "UnknownFeature";
    case Err::TooManyClasses: return "TooManyClasses";
    case Err::IoError: return "IoError";
    }
    return "UnknownError";
}

Error::Error(Err code, const std::string& msg)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

void raise(Err code, const std::string& msg) { throw Error(code, msg); }

} // namespace dlm
