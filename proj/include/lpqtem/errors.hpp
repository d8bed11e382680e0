#pragma once

#include <stdexcept>
#include <string>

namespace lpq {

// Bad arguments: non-finite data, mismatched grids, out-of-range exponents.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration file problems (parse, unknown key, failed validation).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented operation precondition does not hold for otherwise valid input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GapError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ContractionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularGeneratorError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class WindowGrowthError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ResolutionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Something that cannot happen when preconditions hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lpq
