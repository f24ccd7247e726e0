#pragma once

#include <stdexcept>
#include <string>

namespace qpnls {

/// Root of the library's error hierarchy. The three direct branches map to
/// the CLI exit codes: ConfigError -> 1, NumericError -> 2, IoError -> 3.
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

class IoError : public Error {
 public:
  using Error::Error;
};

/// Config file is syntactically malformed (bad line, unknown key, bad literal).
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("parse error at line " + std::to_string(line) + ": " + what) {}
};

/// Config parsed but violates a semantic constraint.
class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Two distinct truncated modes map to frequencies closer than the tolerance.
class CollisionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Projection matrix is numerically rank-deficient.
class RankError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DimensionMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

class LatticeMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

class ShapeMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Potential mode list is not conjugate-symmetric (would give a complex V).
class NotRealError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A coefficient became NaN/Inf during time stepping.
class NonFiniteError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Requested final time is not an integer multiple of the step size.
class NonIntegralStepsError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace qpnls
