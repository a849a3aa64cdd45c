#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "isopoly/quotient.hpp"

namespace isopoly {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi]; plain modulo keeps the stream identical across standard libraries.
std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi);
/// Random p/q with 1 <= q <= max_den and lo <= p/q <= hi.
Rational random_rational(Rng& rng, const Rational& lo, const Rational& hi, Index max_den);
/// Random non-empty subset of `pool`, at most max_size elements, sorted.
std::vector<Index> random_subset(Rng& rng, const std::vector<Index>& pool, std::size_t max_size);

/// Up to max_support nonzero coordinates inside the first max_block blocks.
SparseVector random_block_vector(Rng& rng, const BlockSystem& blocks, int max_block, std::size_t max_support,
                                 bool allow_negative, Index max_den = 6);
AtomicMeasure random_measure(Rng& rng, const BlockSystem& blocks, std::size_t max_blocks, Index max_den = 8);
/// Coefficients on block indices 1..depth.
SparseVector random_coefficients(Rng& rng, const BlockSystem& blocks, bool nonnegative, Index max_den = 6);
/// Non-negative rho with ||sum rho_i z_i*||_{Z*} <= 1.
SparseVector random_dual_ball_point(Rng& rng, const Setting& s);

struct L1Case {
  FiniteSet I;
  SegmentProfile profile;
};
L1Case generate_L1(Rng& rng, const Setting& s, bool violate);

struct L3Case {
  AtomicMeasure mu;
  SparseVector u;
  int n = 0;
};
L3Case generate_L3(Rng& rng, const Setting& s, bool violate);

L4Instance generate_L4(Rng& rng, const Setting& s, bool violate);

struct L5Case {
  SparseVector u;
  SparseVector rho;
};
L5Case generate_L5(Rng& rng, const Setting& s, bool violate);

/// Coefficient vectors for the L2 and T3 checks; the violating mode puts mass beyond the ledger depth.
SparseVector generate_coefficients(Rng& rng, const Setting& s, bool violate);

}  // namespace isopoly
