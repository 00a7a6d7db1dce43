#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace monoplay {

// Caller broke a documented precondition (dimension mismatch, bad window, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance or experiment configuration rejected at construction time.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for failures of the numerics themselves.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericError {
 public:
  DivergenceError(long index, const std::string& what)
      : NumericError(what + " (first bad index " + std::to_string(index) + ")"),
        index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

class SingularityError : public NumericError {
 public:
  SingularityError(long index, const std::string& what)
      : NumericError(what + " (step " + std::to_string(index) + ")"), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

// Exact evaluation requested on an instance where no closed form exists.
class UnsupportedInstance : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace monoplay
