#pragma once

#include <stdexcept>
#include <string>

namespace emkm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Green function evaluated at (or numerically at) its source point.
class SingularEvaluation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Linear system too ill-conditioned to solve.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Invalid scenario configuration; `field()` is the dotted path of the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace emkm
