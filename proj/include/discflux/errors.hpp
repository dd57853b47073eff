#pragma once

#include <stdexcept>
#include <string>

namespace discflux {

// Base for every error raised by the library. The CLI maps these to exit
// status 2 and prints what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation point outside a function's domain (beyond the clamp slack).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid argument combination (l >= k, mismatched grids, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Range of a bijection escapes the domain of the flux it is composed with.
class CompositionError : public Error {
 public:
  using Error::Error;
};

// A required precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A transform builder could not produce an admissible pair. `location`
// is the offending state (or the best near-miss parameter).
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double location)
      : Error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

// Explicit step left the attainable range of the conserved map.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// Stored snapshots do not cover a test function's support.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Grid too coarse for the requested measurement.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Bad configuration or unreadable input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace discflux
