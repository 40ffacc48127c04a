#pragma once

#include <stdexcept>
#include <string>

namespace itv {

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Violated operation precondition.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& message) : std::logic_error(message) {}
};

/// Value outside an operation's domain (e.g. a score not on its scale).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& message) : std::runtime_error(message) {}
};

/// Requested enumeration exceeds the configured cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& message) : std::runtime_error(message) {}
};

/// Numerical routine failed to converge.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace itv
