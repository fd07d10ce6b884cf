#pragma once

#include <stdexcept>
#include <string>

namespace cbl {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its physical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operating point is at or above the lasing threshold; no steady state.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

/// A quadrature diffusion strength is negative, so the point has no
/// classical stochastic representation.
class RepresentabilityError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Too much population reached the top of the truncated photon basis.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed sweep specification, preset name or observable name.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbl
