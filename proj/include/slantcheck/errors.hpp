#pragma once

#include <stdexcept>
#include <string>

namespace slantcheck {

// Base for every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or unsupported dimensions in an API call.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A map or derivative produced a non-finite value, or a function was
// evaluated outside its domain.
class EvaluationDomainError : public Error {
 public:
  using Error::Error;
};

// Differential of an immersion is rank-deficient (Gram matrix not positive
// definite) at a named point.
class DegenerateFrameError : public Error {
 public:
  using Error::Error;
};

// Coefficient functions violate the unit-norm constraint at a point.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Structure inputs violate a required algebraic identity (anti-commutation,
// skew-adjointness, J^2 = -I) at a point.
class StructureError : public Error {
 public:
  using Error::Error;
};

// An operation requiring pointwise slant (or proper pointwise slant) was
// invoked at a point where the hypothesis fails.
class SlantHypothesisError : public Error {
 public:
  using Error::Error;
};

// Iterative numerics failed to converge within the pinned budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Scenario/expression text could not be parsed; carries a byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_ = 0;
};

// Scenario parsed but references undefined names or inconsistent dimensions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace slantcheck
