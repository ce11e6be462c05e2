#pragma once

#include <stdexcept>
#include <string>

namespace besselforge {

/// Argument outside the mathematical domain of an operation (e.g. alpha <= -1).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Caller misuse that is not a domain question: mismatched grids, bad configs.
class UsageError : public std::invalid_argument {
public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that left its accuracy envelope (negative densities,
/// failed eigen-solves).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A subspace or projector whose numerical rank differs from the expected one.
class ConstructionError : public std::runtime_error {
public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace besselforge
