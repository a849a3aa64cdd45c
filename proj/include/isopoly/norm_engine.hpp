#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isopoly/measures.hpp"

namespace isopoly {

struct NormOptions {
  /// Cap on the number of weight programs solved; beyond it the certificate is non-exhaustive.
  std::uint64_t program_budget = 2000000;
};

struct NormCertificate {
  Rational value;
  MMember maximizer;
  bool exhaustive = true;
  std::uint64_t programs = 0;
};

/// ||x||_M = max { mu(|x|) : mu in M }, with the maximizing member of M.
NormCertificate norm_M(const SparseVector& x, const BaseSpaceId& space, const BlockSystem& blocks,
                       const NormOptions& options = {});

/// Like norm_M but throws BudgetExceeded instead of returning a non-exhaustive certificate.
NormCertificate exact_norm_M(const SparseVector& x, const BaseSpaceId& space, const BlockSystem& blocks,
                             const NormOptions& options = {});

/// Empty when the maximizer is in M, attains the value on |x|, and the value dominates ||x||_inf.
std::string certificate_violation(const NormCertificate& cert, const SparseVector& x, const BaseSpaceId& space,
                                  const BlockSystem& blocks);

struct DualNormOptions {
  Rational precision = Rational(1, 1000000000);
  std::size_t max_iterations = 5000;
  NormOptions norm;
};

struct DualNormCertificate {
  ScalarBound value;
  /// ||witness||_M <= 1 and f(witness) == value.lower.
  SparseVector witness;
  std::vector<SparseVector> cuts;
  std::size_t iterations = 0;
  bool exact = false;
};

DualNormCertificate dual_norm_M(const SparseVector& f, const BaseSpaceId& space, const BlockSystem& blocks,
                                const DualNormOptions& options = {});

bool check_suppression_unconditional(const SparseVector& x, const std::vector<FiniteSet>& subsets,
                                     const BaseSpaceId& space, const BlockSystem& blocks);

}  // namespace isopoly
