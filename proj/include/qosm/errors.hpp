#pragma once

#include <stdexcept>
#include <string>

namespace qosm {

/// Argument outside the mathematical domain of an operation (q < 1, p < 0, s not in (0,1), ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An improper integral of the quality distribution does not converge.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation defined only for the power-law quality distribution.
class UnsupportedDistribution : public std::invalid_argument {
 public:
  explicit UnsupportedDistribution(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation requires a different market regime (e.g. a cascade in the UC regime).
class RegimeError : public std::logic_error {
 public:
  explicit RegimeError(const std::string& what) : std::logic_error(what) {}
};

/// Cumulative demand over a class interval is zero.
class EmptyDemandError : public std::runtime_error {
 public:
  explicit EmptyDemandError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric routine hit its iteration cap without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qosm
