#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace momentkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values of different rank (multi-index length, polynomial arity,
/// point dimension) met in a binary operation.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs, const std::string& where)
      : Error(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
              std::to_string(rhs) + ")"),
        lhs_(lhs),
        rhs_(rhs) {}

  std::size_t lhs() const noexcept { return lhs_; }
  std::size_t rhs() const noexcept { return rhs_; }

 private:
  std::size_t lhs_;
  std::size_t rhs_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A floating evaluation produced inf/nan; `node_path` names the offending node.
class EvalError : public Error {
 public:
  explicit EvalError(std::string node_path)
      : Error("non-finite value at " + node_path), node_path_(std::move(node_path)) {}

  const std::string& node_path() const noexcept { return node_path_; }

 private:
  std::string node_path_;
};

/// A coefficient family was rejected; `witness` carries the violated instance.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, nlohmann::json witness)
      : Error(what), witness_(std::move(witness)) {}

  const nlohmann::json& witness() const noexcept { return witness_; }

 private:
  nlohmann::json witness_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace momentkit
