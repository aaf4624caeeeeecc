#pragma once

#include <stdexcept>
#include <string>

namespace nmosc {

// Error classes map onto the CLI exit codes: config (1), numeric (2), io (3).
enum class ErrorClass { config = 1, numeric = 2, io = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

private:
  ErrorClass cls_;
};

// Argument outside the operation's domain (omega < 0, T < 0, empty bath, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Operation not defined for this spectral-density variant.
struct UnsupportedVariantError : Error {
  explicit UnsupportedVariantError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// An integral that is provably divergent for the given data.
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Quadrature failed to reach the requested tolerance within its panel budget.
struct AccuracyError : Error {
  explicit AccuracyError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Degenerate implicit step in the time integrator.
struct StepSizeError : Error {
  explicit StepSizeError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Two objects that must share a time grid do not.
struct GridError : Error {
  explicit GridError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Trajectory too short for the requested analysis window.
struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

// Internal numeric failure (eigensolver breakdown, inconsistent cross-check, ...).
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

}  // namespace nmosc
