#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopoly/base_spaces.hpp"
#include "isopoly/construction.hpp"
#include "isopoly/schreier.hpp"
#include "isopoly/sparse_vector.hpp"

namespace isopoly {

struct Atom {
  Index coordinate = 0;
  Rational weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A member of P: at most one weighted atom per block, weights in (0, 1].
/// Setting a zero weight removes the atom.
class AtomicMeasure {
 public:
  using Storage = std::map<int, Atom>;

  AtomicMeasure() = default;

  void set(int block, Index coordinate, const Rational& weight);
  void erase(int block) { atoms_.erase(block); }

  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  const Storage& atoms() const { return atoms_; }
  std::vector<int> touched_blocks() const;
  Rational total_mass() const;
  Index min_support() const;

  SparseVector functional() const;
  Rational evaluate(const SparseVector& x) const;

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  Storage atoms_;
};

/// Empty string when mu is a structurally valid element of P for these blocks.
std::string structural_violation(const AtomicMeasure& mu, const BlockSystem& blocks);
/// Reads a functional as a member of P (one coordinate per block, weights in (0,1]).
std::optional<AtomicMeasure> measure_from_functional(const SparseVector& f, const BlockSystem& blocks);

/// g_n = number of leading elements of F_n in G_n. Blocks absent from the map have g_n = 0.
using SegmentProfile = std::map<int, Index>;

/// sum_n (g_n / |F_n|) z_n
SparseVector profile_vector(const SegmentProfile& profile, const BlockSystem& blocks);
/// sum_n mu(G_n)
Rational profile_mass(const AtomicMeasure& mu, const SegmentProfile& profile, const BlockSystem& blocks);

struct ZBoundResult {
  ScalarBound value;
  SegmentProfile witness;
};

/// One candidate block for subset selection: picking it costs `ratio` in coordinate `block`
/// of the Z-vector and gains `weight`.
struct ZItem {
  int block = 0;
  Rational ratio;
  Rational weight;
};

struct ZSubset {
  Rational value;
  std::vector<int> chosen;  // indices into the item list
};

/// max sum_{i in S} weight_i over S with ||sum_{i in S} ratio_i z_{block_i}||_Z <= 1.
ZSubset best_feasible_subset(const std::vector<ZItem>& items, const BaseSpaceId& space);

bool in_P1(const AtomicMeasure& mu);
ZBoundResult zbounded_optimum(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks);
bool is_zbounded(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks);
bool is_admissible(const std::vector<AtomicMeasure>& parts, const BlockSystem& blocks);

struct MDecomposition {
  std::vector<AtomicMeasure> parts;
  ZBoundResult zbound;

  AtomicMeasure combined() const;
};

/// Witness that a functional lies in M.
struct MMember {
  enum class Kind { Zero, Coordinate, Measure };
  Kind kind = Kind::Zero;
  Index coordinate = 0;
  MDecomposition decomposition;

  static MMember zero() { return {}; }
  static MMember unit(Index j) { return {Kind::Coordinate, j, {}}; }
  static MMember measure(MDecomposition d) { return {Kind::Measure, 0, std::move(d)}; }

  SparseVector functional() const;
  Rational evaluate(const SparseVector& x) const { return functional().dot(x); }
};

std::optional<MDecomposition> in_M(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks);
/// Accepts 0, unit coordinate functionals, and functionals readable as measures in M.
std::optional<MMember> in_M(const SparseVector& f, const BaseSpaceId& space, const BlockSystem& blocks);

AtomicMeasure restrict(const AtomicMeasure& mu, const FiniteSet& coordinates);

struct P1Piece {
  Index label = 0;
  SparseVector functional;
};
struct P1Decomposition {
  FiniteSet labels;
  std::vector<P1Piece> pieces;
};

P1Decomposition p1_decompose(const MMember& member);
/// Empty string when the labels form an S_1 set, each piece has l1 mass <= 1 and min supp >= label.
std::string p1_violation(const P1Decomposition& d);

/// "n:(j,num/den); ..." one triple per block.
AtomicMeasure parse_measure(std::string_view text);
std::string format_measure(const AtomicMeasure& mu);
std::string format_profile(const SegmentProfile& profile);

}  // namespace isopoly
