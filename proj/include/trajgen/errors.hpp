#pragma once

#include <stdexcept>
#include <string>

namespace trajgen {

// Base class for all library errors. The CLI maps these to exit code 1;
// argument-parsing problems exit with 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values (parameter out of range, dimension mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Factorization or PSD repair failed beyond the jitter cap.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Degenerate geometry: zero-length joint legs, zero-arc-length curves,
// observations under which every mixture component underflows.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Dataset spec document problems. Carries a location string such as
// "components[1].segments[2].joint".
class SpecError : public Error {
 public:
  SpecError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Evaluation window would index outside a component's trajectory.
class WindowError : public Error {
 public:
  using Error::Error;
};

// A predictor violated its output contract (wrong horizon or dimension).
class PredictorError : public Error {
 public:
  using Error::Error;
};

// A metric was asked for an input form it does not support
// (e.g. NLL of a sample-set prediction without a density).
class UnsupportedFormError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trajgen
