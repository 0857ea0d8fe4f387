#pragma once

#include <stdexcept>
#include <string>

namespace steadyrc {

/// Base class for every error thrown by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration (invalid hyperparameters, unknown keys, ...). CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Bad or missing data (files, episodes, manifests). CLI exit code 3.
struct DataError : Error {
  using Error::Error;
};

/// Matrix whose spectral radius is (numerically) zero and cannot be rescaled.
struct DegenerateMatrix : Error {
  using Error::Error;
};

/// Operand dimensions do not line up.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Normal equations are rank-deficient and no regularization was requested.
struct SingularSystem : Error {
  using Error::Error;
};

/// Fewer data points than the operation needs (e.g. windows < k).
struct InsufficientData : DataError {
  using DataError::DataError;
};

/// Episode shorter than the final 45-minute averaging window.
struct EpisodeTooShort : DataError {
  using DataError::DataError;
};

/// The capacity signal never enters the steady-state margin for good.
struct NoSteadyState : DataError {
  using DataError::DataError;
};

/// A normalization maximum is zero or negative.
struct ZeroMaximum : DataError {
  using DataError::DataError;
};

/// Score set contains only one class; ROC is undefined.
struct SingleClass : DataError {
  using DataError::DataError;
};

/// No threshold satisfies the requested false-positive-rate budget.
struct Unattainable : Error {
  using Error::Error;
};

/// Precondition violated by the caller (bad index, double normalization, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace steadyrc
