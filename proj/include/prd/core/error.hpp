#pragma once

#include <stdexcept>
#include <string>

namespace prd {

// Raised when a caller breaks an operation's preconditions (bad index, shape
// mismatch, malformed config).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Raised when a network output, loss or update stops being finite.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on unreadable or incompatible files (checkpoints, episodes, metrics).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace prd
