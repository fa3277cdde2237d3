#ifndef SEMICOMP_ERRORS_HPP
#define SEMICOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semicomp {

/// Argument outside the mathematical domain of a family or transform.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Derivative multi-index that the copula engine does not serve.
class UnsupportedIndexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Kendall's tau that the requested family cannot attain.
class UnattainableTauError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Information matrix too close to singular to invert.
class SingularInformationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative root finder failed to converge.
class RootFindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset violates a row-level invariant. `row()` is 1-based (data rows, header excluded).
class DatasetError : public std::runtime_error {
 public:
  DatasetError(long row, const std::string& what)
      : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

/// Invalid configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semicomp

#endif  // SEMICOMP_ERRORS_HPP
