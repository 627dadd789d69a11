#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fidesp {

/// Invalid argument, dimension mismatch or violated precondition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A triangular or diagonal solve hit a zero (or numerically zero) pivot.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A size or memory cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arnoldi breakdown with a residual still above tolerance.
class BreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fidesp
