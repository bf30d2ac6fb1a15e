#pragma once

#include <stdexcept>
#include <string>

namespace ushrink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (dimension mismatch, bad CSV, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Fewer observations than the estimator's sample-size precondition.
class InsufficientSampleError : public InputError {
 public:
  using InputError::InputError;
};

/// A numeric parameter outside its admissible range.
class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

/// A caller-declared property (e.g. symmetry of an evaluation function) is missing.
class ContractError : public InputError {
 public:
  using InputError::InputError;
};

/// The requested operation is not defined for this input kind.
class UnsupportedOperationError : public InputError {
 public:
  using InputError::InputError;
};

/// A computation would exceed a configured resource limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// No analytic formula or implementation exists for the requested configuration.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ushrink
