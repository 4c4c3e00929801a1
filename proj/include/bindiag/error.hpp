#pragma once

#include <stdexcept>
#include <string>

namespace bindiag {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by a statistical test whose statistic is undefined for the input
/// (e.g. a zero-variance sample in the F-test).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// File-system and format failures; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bindiag
