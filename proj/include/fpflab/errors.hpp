#pragma once

#include <stdexcept>
#include <string>

namespace fpflab {

/// Base class for all errors raised by the filtering library.
struct FilterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A matrix required to be symmetric positive-definite is not.
struct NotSpdError : FilterError {
  using FilterError::FilterError;
};

/// An empirical covariance is numerically singular (min eig < 1e-10 * max eig).
struct SingularCovarianceError : FilterError {
  using FilterError::FilterError;
};

/// A simulation step produced NaN or infinity.
struct NonFiniteError : FilterError {
  using FilterError::FilterError;
};

/// Every importance weight underflowed to zero.
struct AllWeightsZeroError : FilterError {
  using FilterError::FilterError;
};

/// A kernel row sum underflowed to zero (bandwidth far too small).
struct DegenerateKernelError : FilterError {
  using FilterError::FilterError;
};

/// A quadrature grid does not capture enough probability mass.
struct GridTooNarrowError : FilterError {
  using FilterError::FilterError;
};

/// The Galerkin Gram matrix is numerically singular.
struct SingularGramError : FilterError {
  using FilterError::FilterError;
};

/// All particles coincide; no length scale can be derived.
struct ZeroSpreadError : FilterError {
  using FilterError::FilterError;
};

/// Fixed-point iteration ran out of sweeps. Carries the last residual.
struct NoConvergenceError : FilterError {
  NoConvergenceError(int iterations_, double residual_)
      : FilterError("fixed-point iteration did not converge after " +
                    std::to_string(iterations_) + " sweeps (last change " +
                    std::to_string(residual_) + ")"),
        iterations(iterations_),
        residual(residual_) {}
  int iterations;
  double residual;
};

/// Invalid or unknown configuration entry. Carries the offending key path.
struct ConfigError : FilterError {
  ConfigError(std::string key_path, const std::string& reason)
      : FilterError("config error at '" + key_path + "': " + reason),
        key(std::move(key_path)) {}
  std::string key;
};

}  // namespace fpflab
