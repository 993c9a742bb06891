#pragma once

#include <stdexcept>
#include <string>

namespace adaptdim {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix too close to singular for an exact inverse.
class SingularGramError : public Error {
 public:
  SingularGramError(const std::string& what, double ratio)
      : Error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// Exhaustive enumeration requested beyond the configured cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial or wall-clock budget exceeded.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap.
class IterationLimitError : public Error {
 public:
  using Error::Error;
};

/// The adversarial construction needs a shattered point set.
class NotShatteredError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptdim
