#pragma once

#include <stdexcept>
#include <string>

#include "isopoly/rational.hpp"

namespace isopoly {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (space ids, vectors, ledger files, ...).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

/// A precondition on an argument does not hold (p <= 1, depth 0, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// An exact comparison could not be resolved within the precision cap.
class Indeterminate : public Error {
 public:
  explicit Indeterminate(const std::string& what) : Error("indeterminate: " + what) {}
};

/// A lemma verifier was handed an instance that violates its hypotheses.
class HypothesisFailed : public Error {
 public:
  explicit HypothesisFailed(const std::string& what) : Error("hypothesis failed: " + what) {}
};

class NoUpperEstimateWitness : public Error {
 public:
  explicit NoUpperEstimateWitness(const std::string& what) : Error(what) {}
};

/// Block indices ran past the configured coordinate cap.
class OverflowBudget : public Error {
 public:
  explicit OverflowBudget(const std::string& what) : Error(what) {}
};

/// A combinatorial search exceeded its configured budget.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

class DivergenceGuard : public Error {
 public:
  explicit DivergenceGuard(const std::string& what) : Error(what) {}
};

/// Raised by p1_decompose; a valid witness never triggers it.
class DecompositionFailure : public Error {
 public:
  explicit DecompositionFailure(const std::string& what) : Error(what) {}
};

/// The cutting-plane loop hit its iteration cap; carries the enclosure reached so far.
class IterationCap : public Error {
 public:
  IterationCap(const std::string& what, ScalarBound enclosure)
      : Error(what), enclosure_(std::move(enclosure)) {}
  const ScalarBound& enclosure() const { return enclosure_; }

 private:
  ScalarBound enclosure_;
};

}  // namespace isopoly
