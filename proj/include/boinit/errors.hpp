#pragma once

#include <stdexcept>
#include <string>

namespace boinit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (search space, experiment, CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra breakdown, e.g. a kernel matrix that stays indefinite
/// after the maximum jitter.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An objective could not produce a finite value for a configuration.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::string configuration)
      : Error(what), configuration_(std::move(configuration)) {}

  const std::string& configuration() const noexcept { return configuration_; }

 private:
  std::string configuration_;
};

/// External evaluator did not answer in time.
class TimeoutError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

/// External evaluator answered with a line that violates the wire protocol.
class ProtocolError : public EvaluationError {
 public:
  ProtocolError(const std::string& what, std::string configuration, std::string raw_line)
      : EvaluationError(what, std::move(configuration)), raw_line_(std::move(raw_line)) {}

  const std::string& raw_line() const noexcept { return raw_line_; }

 private:
  std::string raw_line_;
};

}  // namespace boinit
