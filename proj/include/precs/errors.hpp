#pragma once

#include <stdexcept>
#include <string>

namespace precs {

/// Base class for every error raised by the library. The exit code is what
/// the command-line front end returns when the error escapes a command.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

/// Invalid user configuration (bad ranges, malformed input).
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// The phase-space grid does not cover the environmental state.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  int exit_code() const noexcept override { return 3; }
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// Fock truncation too small for the requested coherent amplitude.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail)
      : Error(what), tail_(tail) {}
  int exit_code() const noexcept override { return 3; }
  double tail_mass() const noexcept { return tail_; }

 private:
  double tail_;
};

/// Operands live on incompatible subsystems.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Floating-point breakdown (overflow, non-finite values).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace precs
