#pragma once

#include <stdexcept>
#include <string>

namespace eot {

/// Malformed or out-of-contract input: bad weights, ragged CSV rows,
/// unknown policy strings. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation precondition, e.g. applying a trade that
/// validate_trade rejects or mixing price steps into an entropy delta.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An engine invariant failed at runtime (conservation drift, negative
/// entropy production). Always a bug or a numerical breakdown.
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eot
