#pragma once

#include <stdexcept>
#include <string>

namespace kleinprym {

/// Caller supplied an odd or otherwise malformed subset of the Weierstrass index set.
class InvalidSubset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Out-of-range prime, degree, branch assignment or command-line parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quadratic model with no branch points does not define a curve.
class NotACurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point counts that cannot come from a curve (non-integral L-coefficients,
/// Weil violations during reconstruction).
class CountInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that the mathematics guarantees was violated. Always a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kleinprym
