#pragma once

#include <stdexcept>
#include <string>

namespace kernlat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bernoulli / zeta order outside the hard-coded closed forms.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// Weights that the fast evaluators cannot handle.
class UnsupportedWeightsError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Generating-vector text that cannot be parsed; the message names the field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A circulant operator with an eigenvalue indistinguishable from zero.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// Round-off exceeded the precision-scaled tolerance; retry at more bits.
class PrecisionLossError : public Error {
 public:
  using Error::Error;
};

/// An oracle would exceed its configured work budget, or was cancelled.
class ResourceGuardError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kernlat
