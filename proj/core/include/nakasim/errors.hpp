#pragma once

#include <stdexcept>
#include <string>

namespace nakasim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference to a block that is not in the store.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Child round not after parent round.
class OrderingError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition (e.g. unequal candidate lengths).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Query for a VDF output that the simulation clock has not produced yet.
class FutureOutputError : public Error {
 public:
  using Error::Error;
};

// Closed form undefined at the boundary (p in {0, 1}).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nakasim
