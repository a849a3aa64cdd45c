#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "isopoly/rational.hpp"

namespace isopoly::lp {

/// A sparse row of structural coefficients: (column, value).
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Exact rational simplex tableau for
///
///     maximize c.x  subject to  A x <= b,  x >= 0
///
/// with b >= 0 for the initial rows, so the slack basis is feasible. Rows may be
/// appended after a solve; the tableau then re-optimizes with dual simplex
/// pivots from the previous optimal basis. Bland-type rules throughout.
class Tableau {
 public:
  explicit Tableau(std::vector<Rational> objective);

  std::size_t num_structural() const { return num_structural_; }
  std::size_t num_rows() const { return rows_.size(); }

  /// Adds the constraint row.x <= rhs. Before the first solve rhs must be >= 0.
  void add_row(const SparseRow& row, const Rational& rhs);

  /// Runs to optimality. Throws InvalidArgument on unbounded or infeasible programs.
  void solve();

  const Rational& value() const { return value_; }
  std::vector<Rational> solution() const;
  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t row, std::size_t col);
  void primal_simplex();
  void dual_simplex();

  std::size_t num_structural_;
  std::size_t num_columns_;
  std::vector<Rational> objective_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> reduced_;
  Rational value_ = 0;
  bool solved_ = false;
  std::size_t pivots_ = 0;
};

struct Solution {
  Rational value;
  std::vector<Rational> x;
};

/// One-shot convenience wrapper.
Solution maximize(const std::vector<Rational>& objective, const std::vector<SparseRow>& rows,
                  const std::vector<Rational>& rhs);

}  // namespace isopoly::lp
