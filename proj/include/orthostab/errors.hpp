#pragma once

#include <stdexcept>
#include <string>

namespace orthostab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shape does not match the space it is used with.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// Inputs to span2 are linearly dependent at the working tolerance.
struct DegenerateSubspace : Error {
  using Error::Error;
};

/// The Thalesian solver could not meet its residual targets.
/// Carries the best residuals reached so callers can report them.
struct ThalesianFailure : Error {
  ThalesianFailure(const std::string& msg, double r1, double r2)
      : Error(msg), res1(r1), res2(r2) {}
  double res1;
  double res2;
};

/// Rejection sampler ran out of attempts.
struct SamplerExhausted : Error {
  using Error::Error;
};

/// defect() was called on a pair that is not orthogonal under the
/// instance's relation.
struct NonOrthogonalPair : Error {
  using Error::Error;
};

/// A doubling orbit left the representable range.
struct OrbitOverflow : Error {
  using Error::Error;
};

/// The pointwise limit is not globally quadratic/additive at the
/// working tolerance.
struct CanonicalizationMismatch : Error {
  using Error::Error;
};

/// Configuration is malformed or internally inconsistent.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace orthostab
