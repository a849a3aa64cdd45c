#pragma once

#include <functional>
#include <vector>

#include "isopoly/rational.hpp"
#include "isopoly/sparse_vector.hpp"

namespace isopoly {

/// Answer of a separation oracle for a polyhedral lattice norm at a point x >= 0:
/// the norm value together with a non-negative norming functional attaining it.
struct Separation {
  Rational norm;
  SparseVector functional;
};

using SeparationOracle = std::function<Separation(const SparseVector& x)>;

/// Linear side constraint coeffs.x <= rhs, known to be valid at some maximizer.
struct SideConstraint {
  SparseVector coefficients;
  Rational rhs;
};

struct BallMaximum {
  ScalarBound value;
  /// Sign-matched point of the unit ball with f(witness) == value.lower.
  SparseVector witness;
  std::vector<SparseVector> cuts;
  std::size_t iterations = 0;
  bool exact = false;
};

struct CuttingPlaneOptions {
  Rational precision = Rational(1, 1000000000);
  std::size_t max_iterations = 5000;
  std::vector<SideConstraint> side_constraints;
  /// Called on every cut before it enters the outer polytope; may throw.
  std::function<void(const SparseVector&)> validate_cut;
};

/// Computes max { f(x) : ||x|| <= 1 } for a 1-unconditional polyhedral norm given by
/// its separation oracle. The outer polytope starts from the coordinate
/// functionals on supp f and grows by one oracle functional per iteration; the
/// loop stops when the LP maximizer lies in the ball (exact) or the gap between
/// f(x*) and f(x*)/||x*|| is within precision. Throws IterationCap otherwise.
BallMaximum maximize_over_ball(const SparseVector& f, const SeparationOracle& oracle,
                               const CuttingPlaneOptions& options = {});

}  // namespace isopoly
