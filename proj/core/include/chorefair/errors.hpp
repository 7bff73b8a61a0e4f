#pragma once

#include <stdexcept>
#include <string>

namespace chorefair {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected instance data (bad sizes, budgets, shapes).
class ValidationError : public Error {
 public:
  enum class Code {
    NonPositiveSize,
    NegativeDisutility,
    NonPositiveBudget,
    DimensionMismatch,
  };

  ValidationError(Code code, const std::string& message)
      : Error(message), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

// Malformed input files or unparsable values at the I/O boundary.
class IoError : public Error {
 public:
  using Error::Error;
};

// An exact envy check whose subset search exceeds both the enumeration
// bound and the pseudo-polynomial fallback's size cap.
class VerificationIntractable : public Error {
 public:
  using Error::Error;
};

// The two-agent solver was handed an instance with n != 2.
class WrongAgentCount : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration was asked for more allocations than the cap allows.
class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

// A guaranteed invariant failed at runtime. Usually a bug here; the
// one documented exception is the divisible cutoff search, which also
// reports this when no single-cutoff advance can make progress on an
// instance (see solve_divisible).
class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace chorefair
