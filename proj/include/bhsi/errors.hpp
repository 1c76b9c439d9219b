#pragma once

#include <stdexcept>
#include <string>

namespace bhsi {

// Base of every error thrown by the library. Subclasses name the contract
// that was broken so callers (and the CLI exit-code mapping) can tell a bad
// request apart from a violated internal invariant.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live on incompatible spaces (dimension or subsystem mismatch).
class CompositionError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied value is outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The object is in the wrong state for the requested transition.
class StateError : public Error {
 public:
  using Error::Error;
};

// A register is too small to hold what is asked of it.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A derived object could not be built from otherwise valid inputs.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// An input state does not satisfy an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical identity that must hold by construction did not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace bhsi
