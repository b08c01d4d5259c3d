#pragma once

#include <stdexcept>
#include <string>

namespace wavedecay {

/// A caller supplied parameters outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal cross-check failed. Signals a bug, never bad user input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base for failures that only show up while computing.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class CflViolation : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class DampingBoundsViolation : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class InsufficientSamples : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace wavedecay
