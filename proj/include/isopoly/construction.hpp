#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopoly/base_spaces.hpp"
#include "isopoly/rational.hpp"
#include "isopoly/sparse_vector.hpp"

namespace isopoly {

/// F_n as the integer interval [start, start + length - 1].
struct Block {
  Index start = 0;
  Index length = 0;

  Index end() const { return start + length - 1; }
  bool contains(Index j) const { return start <= j && j <= end(); }
  friend bool operator==(const Block&, const Block&) = default;
};

/// The successive blocks F_1 < F_2 < ... < F_N, with the geometric sizing factor
/// that determines the unmaterialized tail |F_n| = factor * 2^{n+1}, n > N.
class BlockSystem {
 public:
  BlockSystem() = default;
  BlockSystem(std::vector<Block> blocks, Index sizing_factor);

  int depth() const { return static_cast<int>(blocks_.size()); }
  /// 1-based: block(1) is F_1.
  const Block& block(int n) const;
  const std::vector<Block>& blocks() const { return blocks_; }
  Index sizing_factor() const { return sizing_factor_; }

  /// Block index n with j in F_n, if any.
  std::optional<int> block_of(Index j) const;
  /// 1-based position of j inside its block.
  Index position(Index j) const;

  /// sum over materialized n of 1/|F_n|.
  Rational materialized_mass() const;
  /// Closed-form sum_{n > N} 1/|F_n| under the sizing rule.
  Rational tail_mass() const;

  /// Indicator of the initial segment of F_n of the given length.
  SparseVector segment_indicator(int n, Index length) const;

  friend bool operator==(const BlockSystem&, const BlockSystem&) = default;

 private:
  std::vector<Block> blocks_;
  Index sizing_factor_ = 1;
};

struct ParameterLedger {
  BaseSpaceId space;
  Index k0 = 0;
  PhiValue phi_k0;
  Rational lambda;
  int depth = 0;
  std::vector<Rational> eps;    // eps[n] = (1/k0)^n, 0 <= n <= depth
  std::vector<Rational> delta;  // delta[n] = lambda^n
  Rational block_mass_target;

  /// Rational surrogate phi(k0) <= phi_upper() used wherever a bound must stay sound.
  const Rational& phi_upper() const { return phi_k0.bound.upper; }
  /// Valid for every n >= 0, materialized or not.
  Rational epsilon(int n) const;
  Rational delta_at(int n) const;
};

struct K0Selection {
  Index k0 = 0;
  PhiValue phi;
};

/// Least k in [2, k_max] with a certificate phi(k) < k.
K0Selection select_k0(const BaseSpaceId& space, Index k_max);

struct LambdaRule {
  /// Unset: simplest rational within 1/16 of the interval width around its midpoint.
  std::optional<Rational> value;
};

ParameterLedger build_ledger(const BaseSpaceId& space, Index k0, const PhiValue& phi_k0,
                             const LambdaRule& lambda_rule, int depth,
                             const Rational& block_mass_target = Rational(1, 2));

struct SizingRule {
  /// |F_n| = factor * 2^{n+1}; unset picks the least factor meeting the mass target.
  std::optional<Index> factor;
  Index coordinate_cap = Index{1} << 40;
};

BlockSystem build_blocks(const ParameterLedger& ledger, const SizingRule& rule = {});

/// Independent coordinate-by-coordinate re-check of both block conditions.
/// Returns an empty string when valid, else a description of the violated inequality.
std::string block_violation(const ParameterLedger& ledger, const BlockSystem& blocks);

/// Certified lower bound for A = (1/2)(1 - sum_n 1/|F_n|).
Rational constant_A(const BlockSystem& blocks);

/// B_n = k0 phi [ (phi/k0)^n + (phi/(lambda k0))^n ] with the rational surrogate for phi.
Rational level_bound_B(const ParameterLedger& ledger, int n);

/// Certified upper bound for C = sum_{n>=0} (n eps_n + 2 k0 delta_n + B_n), closed form.
Rational constant_C(const ParameterLedger& ledger);

struct ParameterFile {
  ParameterLedger ledger;
  BlockSystem blocks;
};

/// key = value text; sequences as comma-separated num/den.
std::string serialize_parameters(const ParameterLedger& ledger, const BlockSystem& blocks);
ParameterFile parse_parameters(std::string_view text);

ParameterFile load_parameters(const std::string& path);
void save_parameters(const std::string& path, const ParameterLedger& ledger, const BlockSystem& blocks);

}  // namespace isopoly
