#pragma once

#include <stdexcept>
#include <string>

namespace cfda {

/// Root of the library's error hierarchy. The three direct children map to
/// the CLI exit codes: ConfigError -> 2, DataError -> 3, NumericError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// --- composition / simplex algebra ---

struct NegativeEntry : DataError {
    using DataError::DataError;
};

struct AllZeroColumn : DataError {
    using DataError::DataError;
};

struct NonPositiveEntry : NumericError {
    using NumericError::NumericError;
};

struct GridMismatch : DataError {
    using DataError::DataError;
};

struct DimensionMismatch : DataError {
    using DataError::DataError;
};

struct Overflow : NumericError {
    using NumericError::NumericError;
};

/// clr_inv input whose column sums are too far from zero to recenter.
struct NotCentered : NumericError {
    using NumericError::NumericError;
};

// --- smoothing / imputation ---

struct SingularFit : NumericError {
    using NumericError::NumericError;
};

struct InsufficientCompleteCurves : DataError {
    using DataError::DataError;
};

struct GuardViolation : DataError {
    using DataError::DataError;
};

// --- cfpca ---

struct EmptySample : DataError {
    using DataError::DataError;
};

struct NonPSD : NumericError {
    using NumericError::NumericError;
};

struct ConvergenceFailure : NumericError {
    using NumericError::NumericError;
};

// --- clustering ---

struct DegenerateEmbedding : NumericError {
    using NumericError::NumericError;
};

struct EmptyCluster : NumericError {
    using NumericError::NumericError;
};

struct SingleCluster : DataError {
    using DataError::DataError;
};

// --- ingest ---

struct HeaderMismatch : DataError {
    using DataError::DataError;
};

struct UnknownRevision : ConfigError {
    using ConfigError::ConfigError;
};

struct AmbiguousCode : DataError {
    using DataError::DataError;
};

struct MissingYearBeyondGuard : DataError {
    using DataError::DataError;
};

// --- pipeline ---

struct MissingUpstreamArtifact : DataError {
    using DataError::DataError;
};

}  // namespace cfda
