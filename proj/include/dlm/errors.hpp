#pragma once

#include <stdexcept>
#include <string>

namespace dlm {

// Every recoverable failure in the toolkit is raised as an Error carrying
// one of these codes, so callers (and the CLI) can react structurally
// instead of parsing messages.
enum class Err {
    // input parsing / dataset assembly
    DimensionMismatch,
    NonFiniteValue,
    EmptyInput,
    MissingColumn,
    InvalidEnumValue,
    EmptyJoin,
    InfeasibleSplit,
    // cue extraction
    EmptyWord,
    BadOrder,
    // linear mappings and similarity
    ShapeMismatch,
    NonFiniteInput,
    ZeroVariance,
    ZeroNorm,
    // production
    NoPath,
    EmptyEvaluation,
    // classification and dimensionality reduction
    SingularCovariance,
    ClassTooSmall,
    EmptyLabels,
    DegenerateCounts,
    PerplexityTooLarge,
    NoPairs,
    // reporting / CLI
    UnknownFeature,
    TooManyClasses,
    IoError,
};

const char* err_name(Err code);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg);
    Err code() const { return code_; }
    const char* name() const { return err_name(code_); }

private:
    Err code_;
};

[[noreturn]] void raise(Err code, const std::string& msg);

} // namespace dlm
