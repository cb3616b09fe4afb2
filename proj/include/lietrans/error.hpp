#pragma once

#include <stdexcept>
#include <string>

namespace lietrans {

// Bad shapes, out-of-range parameters, unreadable files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures: divergence, rank deficiency, ill-conditioning.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficiency : public NumericalError {
 public:
  RankDeficiency(const std::string& what, int null_directions)
      : NumericalError(what), null_directions_(null_directions) {}
  int null_directions() const noexcept { return null_directions_; }

 private:
  int null_directions_;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lietrans
