#pragma once

#include <stdexcept>
#include <string>

namespace bvf {

// Invalid argument to a mathematical function (t < 0, lambda <= 0, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Input data that violates a data-model invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; the message carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Estimation could not be carried out (no failures, too many failed resamples, ...).
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// Observed information matrix is not positive definite.
class SingularMatrixError : public EstimationError {
 public:
  explicit SingularMatrixError(const std::string& what) : EstimationError(what) {}
};

}  // namespace bvf
