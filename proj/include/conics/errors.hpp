#pragma once

#include <stdexcept>
#include <string>

namespace conics {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact-arithmetic failures: division by zero, poles, truncation-order
/// mismatches and monomial degree overflow.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// The order-by-order solver met a condition it cannot satisfy.
class DerivationError : public Error {
 public:
  using Error::Error;
};

/// Invalid curve specifications and failed geometric constructions.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Circle-map preconditions that do not hold (parity, fixed-point count, ...).
class DynamicsError : public Error {
 public:
  using Error::Error;
};

}  // namespace conics
