#pragma once

#include <stdexcept>
#include <string>

namespace visco {

/// Invalid input: out-of-range index, grid mismatch, bad rank, bad parameter.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of a diagnostic does not hold for the given input.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Non-finite values appeared while time stepping.
class BlowUp : public std::runtime_error {
 public:
  explicit BlowUp(double time)
      : std::runtime_error("non-finite state at t = " + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Initial-data construction produced a result outside its residual tolerances.
class ConstructionFailure : public std::runtime_error {
 public:
  ConstructionFailure(std::string residual_name, double value, double tolerance)
      : std::runtime_error("construction failed: " + residual_name + " = " + std::to_string(value) +
                           " exceeds " + std::to_string(tolerance)),
        name_(std::move(residual_name)),
        value_(value) {}
  const std::string& residual_name() const { return name_; }
  double value() const { return value_; }

 private:
  std::string name_;
  double value_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace visco
