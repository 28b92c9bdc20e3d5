#pragma once

#include <stdexcept>
#include <string>

namespace prism {

// A vertex topology violates the integer realizability congruence.
class RealizabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A build was requested for the wrong topology class.
class ClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation point outside the closed quarter disk, or a map evaluated at
// its pole.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature could not reach the requested tolerance. Carries the partial
// result and its error estimate.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_(error_estimate) {}

  double partial_result() const { return partial_; }
  double error_estimate() const { return error_; }

 private:
  double partial_;
  double error_;
};

// No admissible glue disk was found after the shrink iterations.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boundary winding extraction could not resolve a step below the unwrap
// threshold within the sample budget.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration does not satisfy the tangent boundary conditions to the
// required residual.
class BoundaryConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal inconsistency in a builder; unreachable for valid inputs.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A file could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text does not conform to the configuration schema.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace prism
