#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace driftspec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside an expression's domain (log of non-positive, 1/0, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Invalid geometry, mesh, or weight (a >= b, non-positive height, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: indefinite mass matrix, non-convergence, breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Bad or inconsistent job configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A report or config file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace driftspec
