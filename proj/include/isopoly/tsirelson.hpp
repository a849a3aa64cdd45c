#pragma once

#include <cstddef>

#include "isopoly/rational.hpp"
#include "isopoly/sparse_vector.hpp"

namespace isopoly {

/// Norm of Tsirelson's space T on a finitely supported vector,
///
///     ||x|| = max( ||x||_inf , 1/2 sup sum_i ||E_i x|| ),
///
/// the sup running over k <= E_1 < ... < E_k (successive intervals, k <= min E_1).
struct TsirelsonNorm {
  Rational value;
  /// Norming functional (a signed combination of coordinate functionals) with
  /// witness.dot(x) == value and dual norm <= 1.
  SparseVector witness;
};

/// Exact bottom-up evaluation over intervals of the support, memoized per
/// canonicalized |x|. Safe to call concurrently.
TsirelsonNorm tsirelson_norm(const SparseVector& x);

/// One application of the implicit equation, with the inner norms taken from
/// tsirelson_norm. At the true norm this reproduces tsirelson_norm(x).
Rational tsirelson_recursion_step(const SparseVector& x);

std::size_t tsirelson_cache_size();
void clear_tsirelson_cache();

}  // namespace isopoly
