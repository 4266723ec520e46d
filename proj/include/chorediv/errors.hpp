#pragma once

#include <stdexcept>
#include <string>

namespace chorediv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Instance validation failures.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};
class WeightSumError : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};
class NonPositiveWeight : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};
class NegativeCost : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};
class DimensionMismatch : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};
class NonPositiveFactor : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};

/// An assignment is not a complete, disjoint cover of the chores.
class IncompleteAssignment : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would visit more than the configured cap.
class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// A copy count 2*w_i/w_minp is not an integer: the instance skipped the
/// entitlement rounding step.
class NonIntegralCopyCount : public Error {
 public:
  using Error::Error;
};

/// The moving knife found no copy able to take even the next single chore.
class NoAffordableAgent : public Error {
 public:
  using Error::Error;
};

/// Input to the layered moving knife is not sorted / divisible / ascending.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A red1 grouping is not a partition with distinct representatives.
class InvalidGrouping : public Error {
 public:
  using Error::Error;
};

/// Entitlements handed to the bound calculus are not a positive vector.
class InvalidWeights : public Error {
 public:
  using Error::Error;
};

}  // namespace chorediv
