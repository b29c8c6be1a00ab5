#pragma once

#include <stdexcept>
#include <string>

namespace ellhyp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A KernelSpec violates one of its construction invariants.
class InvalidKernel : public Error {
 public:
  using Error::Error;
};

/// A series (theta or generating function) failed its truncation criterion.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// A denominator factor came within the pole tolerance of a kernel zero.
class PoleHit : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Neither termination mode (A) nor (B) holds for an E-series.
class TerminationUnsatisfied : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

class ConstraintViolated : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input; `field()` names the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ellhyp
