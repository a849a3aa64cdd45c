#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isopoly/construction.hpp"
#include "isopoly/measures.hpp"
#include "isopoly/norm_engine.hpp"

namespace isopoly {

/// Everything a verifier needs: Z, the ledger and its blocks.
struct Setting {
  BaseSpaceId space;
  ParameterLedger ledger;
  BlockSystem blocks;
  Rational precision = Rational(1, 1000000000);

  Rational A() const { return constant_A(blocks); }
  Rational C() const { return constant_C(ledger); }
};

/// Outcome of one verification: the verdict plus the measured quantities, all exact text.
struct Verdict {
  bool passed = true;
  std::vector<std::pair<std::string, std::string>> measured;

  void record(const std::string& key, const std::string& value) { measured.emplace_back(key, value); }
  void record(const std::string& key, const Rational& value) { record(key, format_rational(value)); }
  void require(bool ok, const std::string& key) {
    record(key, ok ? "ok" : "FAIL");
    passed = passed && ok;
  }
};

SparseVector u_star(int n, const BlockSystem& blocks);
/// sum_n a_n u_n*
SparseVector u_star_combination(const SparseVector& a, const BlockSystem& blocks);
/// Z-coefficients (sum_{k in F_n} x_k) / |F_n|.
SparseVector apply_Q(const SparseVector& x, const BlockSystem& blocks);

/// The functional x -> z_n*(Qx), read off coordinate by coordinate.
SparseVector adjoint_functional(int n, const BlockSystem& blocks);
bool verify_adjoint(int n, const BlockSystem& blocks);
/// Compares a candidate for Q*(z_n*) against the adjoint; negative controls pass perturbed candidates.
bool verify_adjoint_candidate(int n, const SparseVector& candidate, const BlockSystem& blocks);

/// Indicator of the union of the initial segments.
SparseVector segment_indicator(const SegmentProfile& profile, const BlockSystem& blocks);

Verdict verify_L1(const FiniteSet& I, const SegmentProfile& profile, const Setting& s);

/// The initial segments and test vector built from a norming vector b of sum a_i z_i*.
struct L2Witness {
  SparseVector b;
  SegmentProfile profile;
  SparseVector u;
  Rational pairing;  // sum a_i b_i
  Rational value;    // sum a_i |G_i| / |F_i|
};
L2Witness l2_witness(const SparseVector& a, const Setting& s);

Verdict verify_L2_lowerbound(const SparseVector& a, const Setting& s);

struct L3Chunks {
  AtomicMeasure heavy;                // lambda_i >= 1/2
  std::vector<AtomicMeasure> light;   // successive maximal initial segments of the rest
};
L3Chunks l3_chunks(const AtomicMeasure& mu);

Verdict verify_L3(const AtomicMeasure& mu, const SparseVector& u, int n, const Setting& s);

struct L4Instance {
  FiniteSet I;
  int n = 0;
  SegmentProfile segments;
  SparseVector rho;
  std::vector<std::vector<int>> family;
  SparseVector u;
};
Verdict verify_L4(const L4Instance& instance, const Setting& s);

struct Level {
  int n = 0;
  std::vector<int> blocks;          // I_n blocks with a coordinate at this level
  std::vector<int> low_blocks;      // i <= n with a coordinate at this level
  std::map<int, Index> deepest;     // j_i^n
  SegmentProfile segments;          // g_i = pos(j_i^n)
  std::vector<std::vector<int>> bad_family;
  AtomicMeasure leftover;           // mu_n
  Rational low_contribution;
  Rational leftover_contribution;
  Rational bad_contribution;
  Rational bad_mass;
  Rational leftover_on_u;           // mu_n(u)
};

struct LevelDecomposition {
  std::vector<Level> levels;
  Rational total;                   // sum_i rho_i u_i*(u)
};

LevelDecomposition l5_decompose(const SparseVector& u, const SparseVector& rho, const Setting& s);
Verdict verify_L5(const SparseVector& u, const SparseVector& rho, const Setting& s);

Verdict verify_T3_sandwich(const SparseVector& a, const Setting& s);
/// ||Qx||_Z <= C ||x||_M
Verdict verify_operator_bound(const SparseVector& x, const Setting& s);

}  // namespace isopoly
