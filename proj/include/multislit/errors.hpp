#pragma once

#include <stdexcept>
#include <string>

namespace multislit {

// Inputs that violate a documented precondition (dimension mismatch,
// invalid priors, unsupported slit count, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input was well-formed but the numerics cannot produce a result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by visibility extraction when the pattern carries no fringes.
class NoFringesError : public NumericError {
 public:
  NoFringesError() : NumericError("no fringes") {}
};

}  // namespace multislit
