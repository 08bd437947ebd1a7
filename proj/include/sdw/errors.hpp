#pragma once

#include <stdexcept>
#include <string>

namespace sdw {

/// Input rejected by a precondition check (bad dimension, out-of-domain
/// parameter, non-finite sample, ...). The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its target (quadrature did not
/// converge, overflow, ...). The CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double achieved_error = 0.0)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace sdw
