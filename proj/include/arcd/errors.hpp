#pragma once

#include <stdexcept>
#include <string>

namespace arcd {

/// Base class for every numerical failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// X'X of the regression design is (numerically) singular.
class DegenerateDesign : public Error {
 public:
  DegenerateDesign(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A threshold or root search has no admissible solution.
class NoSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace arcd
