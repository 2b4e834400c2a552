#pragma once

#include <stdexcept>
#include <string>

namespace gevstat {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (probability not in (0,1), rank > n, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or empty input data.
class InputError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Observed information matrix could not be inverted.
class SingularInformationError : public Error {
 public:
  SingularInformationError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  [[nodiscard]] double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class ResamplingError : public Error {
 public:
  using Error::Error;
};

// Profile grid does not reach the deviance threshold on one side.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, std::string side) : Error(what), side_(std::move(side)) {}
  [[nodiscard]] const std::string& side() const noexcept { return side_; }

 private:
  std::string side_;
};

}  // namespace gevstat
