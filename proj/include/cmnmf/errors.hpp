#pragma once

#include <stdexcept>
#include <string>

namespace cmnmf {

// Incompatible matrix dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value violated a domain constraint (negative entry, bad parameter, pair
// outside the universe, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or empty input file, unknown identifiers, hierarchy cycles.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public ParseError {
 public:
  using ParseError::ParseError;
};

// An edge or annotation names a term the hierarchy does not define.
class ReferenceError : public ParseError {
 public:
  using ParseError::ParseError;
};

class CycleError : public ParseError {
 public:
  CycleError(const std::string& member)
      : ParseError("hierarchy contains a cycle through '" + member + "'"), member_(member) {}

  const std::string& member() const noexcept { return member_; }

 private:
  std::string member_;
};

// A requested ontology level holds no terms.
class LevelError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Level splitting left a view without rows or columns.
class EmptyViewError : public DomainError {
 public:
  using DomainError::DomainError;
};

// NaN or Inf appeared during the multiplicative updates.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace cmnmf
