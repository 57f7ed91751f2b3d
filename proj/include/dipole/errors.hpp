#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dipole {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (asymmetric matrix, size mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A statistic is undefined for the input, e.g. a correlation against a constant vector.
class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConnectivityError : public Error {
 public:
  explicit ConnectivityError(std::size_t components)
      : Error("neighbor graph is disconnected (" + std::to_string(components) +
              " components); pass --connect or raise --m1"),
        components_(components) {}

  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A cached result no longer agrees with the data it was computed from.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace dipole
