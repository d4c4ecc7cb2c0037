// Error taxonomy. ConfigError covers everything that makes the requested
// instance invalid before any arithmetic runs (CLI exit code 2); NumericError
// covers failures of the computation itself (exit code 3). Invariant-check
// failures are reported as data, not exceptions, and map to exit code 1.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anisofrac {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

// --- configuration / instance admissibility ---

class ConfigParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ConfigValidationError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class SyntaxError : public ConfigError {
public:
  SyntaxError(std::size_t position, const std::string& expected)
      : ConfigError("syntax error at offset " + std::to_string(position) +
                    ": expected " + expected),
        position(position), expected(expected) {}
  std::size_t position;
  std::string expected;
};

class UnknownIdentifier : public ConfigError {
public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : ConfigError("unknown identifier '" + name + "' at offset " +
                    std::to_string(position)),
        position(position), name(name) {}
  std::size_t position;
  std::string name;
};

// Evaluating an exponent expression hit a hard error (division by zero,
// clamp bounds out of order, non-finite intermediate).
class EvalError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// A sampled exponent value fell outside (1, inf) or was non-finite.
class ExponentOutOfRange : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Reaction exponent violates r+ < P-- (sampled).
class RExponentTooLarge : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// s * p(x,x) >= dimension: the critical exponent is undefined.
class SupercriticalOrder : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class BadResolution : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Collar radius does not contain the domain (or violates a radius precondition).
class CollarTooSmall : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class EmptyFamily : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Exponent ordering needed by the variational chain fails (e.g. r+ >= Ptilde).
class InvalidExponentOrdering : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// --- numerical failures ---

class NonFiniteIntegrand : public NumericError {
public:
  using NumericError::NumericError;
};

// full_Q quadrature requires a symmetric kernel; the sampled spot check failed.
class AsymmetricKernel : public NumericError {
public:
  using NumericError::NumericError;
};

// Luxemburg bracketing could not enclose the unit-modular level.
class BracketFailure : public NumericError {
public:
  using NumericError::NumericError;
};

// A sampled sphere direction dipped below the predicted rim level.
class GeometryViolated : public NumericError {
public:
  using NumericError::NumericError;
};

// No scaling of the valley bump produced a negative energy.
class ValleyNotFound : public NumericError {
public:
  using NumericError::NumericError;
};

class MaxIterExceeded : public NumericError {
public:
  using NumericError::NumericError;
};

// Descent converged onto the trust ball boundary.
class BoundaryTrap : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace anisofrac
