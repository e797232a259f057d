#pragma once

#include <stdexcept>
#include <string>

namespace tvopt {

// Bad input: malformed config, violated precondition, unknown name.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Text input that could not be parsed; carries the 1-based line number (0 if not line-bound).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  ParseError(const std::string& context, const ParseError& inner)
      : ValidationError(context + ": " + inner.what()), line_(inner.line()) {}
  int line() const { return line_; }

 private:
  int line_;
};

class NotPsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DisconnectedGraphError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Runtime failures: iterative solver caps, graph generation, I/O.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tvopt
