#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopoly/rational.hpp"
#include "isopoly/sparse_vector.hpp"

namespace isopoly {

enum class SpaceKind { Unset, Lp, C0, C0SumLp, Tsirelson };

/// The base space Z together with its normalized 1-unconditional basis (z_n).
struct BaseSpaceId {
  SpaceKind kind = SpaceKind::Unset;
  /// Exponent p = p_num / p_den > 1 for Lp and C0SumLp.
  unsigned long p_num = 0;
  unsigned long p_den = 1;
  /// Sizes of the successive inner c0 groups for C0SumLp; the last size repeats forever.
  std::vector<Index> group_sizes;

  static BaseSpaceId lp(const Rational& p);
  static BaseSpaceId c0();
  static BaseSpaceId c0sum_lp(const Rational& p, std::vector<Index> group_sizes);
  static BaseSpaceId tsirelson();

  Rational p() const { return ratio(p_num, p_den); }
  /// 0-based group of a coordinate, C0SumLp only.
  Index group_of(Index coordinate) const;

  friend bool operator==(const BaseSpaceId&, const BaseSpaceId&) = default;
};

/// "lp:3/2", "c0", "c0sum-lp:2:blocks=2,3", "tsirelson"
BaseSpaceId parse_space(std::string_view text);
std::string format_space(const BaseSpaceId& space);

enum class BallPosition { Inside, Boundary, Outside };
std::string to_string(BallPosition position);

ScalarBound norm(const BaseSpaceId& space, const SparseVector& x, const Rational& precision);
BallPosition ball_member(const BaseSpaceId& space, const SparseVector& x);

ScalarBound dual_norm(const BaseSpaceId& space, const SparseVector& f, const Rational& precision);
/// Exact trichotomy of ||f||_{Z*} against 1.
BallPosition dual_ball_member(const BaseSpaceId& space, const SparseVector& f);

/// phi_Z(k): the largest norm of a sum of k disjoint blocks of norm <= 1.
struct PhiValue {
  ScalarBound bound;
  /// Closed form when one is known (k^{1/p} and 1).
  std::optional<Surd> exact;
  /// False when `bound` is only a lower bound plus the trivial upper bound k.
  bool tight = true;
};

PhiValue phi(const BaseSpaceId& space, Index k, Index support_budget);
bool verify_submultiplicative(const BaseSpaceId& space, Index m, Index n);

/// Default precision used when a phi closed form is turned into an enclosure.
Rational phi_precision();

}  // namespace isopoly
