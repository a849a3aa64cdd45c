#include "isopoly/simplex.hpp"

#include <limits>
#include <optional>

#include "isopoly/errors.hpp"

namespace isopoly::lp {

Tableau::Tableau(std::vector<Rational> objective)
    : num_structural_(objective.size()),
      num_columns_(objective.size()),
      objective_(std::move(objective)),
      reduced_(objective_) {}

void Tableau::add_row(const SparseRow& row, const Rational& rhs) {
  if (!solved_ && rhs < 0) throw InvalidArgument("initial rows need a non-negative right-hand side");

  // New slack column, zero in every existing row.
  const std::size_t slack = num_columns_++;
  for (auto& r : rows_) r.emplace_back(0);
  reduced_.emplace_back(0);

  std::vector<Rational> dense(num_columns_);
  for (const auto& [col, v] : row) {
    if (col >= num_structural_) throw InvalidArgument("constraint references an unknown column");
    dense[col] += v;
  }
  dense[slack] = 1;
  Rational b = rhs;

  // Express the row in terms of the current non-basic variables.
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t basic = basis_[r];
    if (sgn(dense[basic]) == 0) continue;
    const Rational factor = dense[basic];
    const auto& src = rows_[r];
    for (std::size_t j = 0; j < num_columns_; ++j) {
      if (sgn(src[j]) != 0) dense[j] -= factor * src[j];
    }
    b -= factor * rhs_[r];
  }
  rows_.push_back(std::move(dense));
  rhs_.push_back(std::move(b));
  basis_.push_back(slack);
}

void Tableau::pivot(std::size_t row, std::size_t col) {
  ++pivots_;
  auto& prow = rows_[row];
  const Rational inv = 1 / prow[col];
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < num_columns_; ++j) {
    if (sgn(prow[j]) != 0) {
      prow[j] *= inv;
      nz.push_back(j);
    }
  }
  rhs_[row] *= inv;

  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (r == row) continue;
    auto& target = rows_[r];
    if (sgn(target[col]) == 0) continue;
    const Rational factor = target[col];
    for (std::size_t j : nz) target[j] -= factor * prow[j];
    rhs_[r] -= factor * rhs_[row];
  }
  if (sgn(reduced_[col]) != 0) {
    const Rational factor = reduced_[col];
    for (std::size_t j : nz) reduced_[j] -= factor * prow[j];
    value_ += factor * rhs_[row];
  }
  basis_[row] = col;
}

void Tableau::primal_simplex() {
  for (;;) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < num_columns_; ++j) {
      if (sgn(reduced_[j]) > 0) {
        entering = j;
        break;
      }
    }
    if (!entering) return;
    const std::size_t col = *entering;
    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& a = rows_[r][col];
      if (sgn(a) <= 0) continue;
      Rational ratio = rhs_[r] / a;
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
        leaving = r;
        best_ratio = std::move(ratio);
      }
    }
    if (!leaving) throw InvalidArgument("linear program is unbounded");
    pivot(*leaving, col);
  }
}

void Tableau::dual_simplex() {
  for (;;) {
    std::optional<std::size_t> leaving;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (sgn(rhs_[r]) < 0 && (!leaving || basis_[r] < basis_[*leaving])) leaving = r;
    }
    if (!leaving) return;
    const auto& row = rows_[*leaving];
    std::optional<std::size_t> entering;
    Rational best_ratio;
    for (std::size_t j = 0; j < num_columns_; ++j) {
      if (sgn(row[j]) >= 0) continue;
      Rational ratio = reduced_[j] / row[j];
      if (!entering || ratio < best_ratio) {
        entering = j;
        best_ratio = std::move(ratio);
      }
    }
    if (!entering) throw InvalidArgument("linear program is infeasible");
    pivot(*leaving, *entering);
  }
}

void Tableau::solve() {
  if (solved_) dual_simplex();
  primal_simplex();
  solved_ = true;
}

std::vector<Rational> Tableau::solution() const {
  std::vector<Rational> x(num_structural_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (basis_[r] < num_structural_) x[basis_[r]] = rhs_[r];
  }
  return x;
}

Solution maximize(const std::vector<Rational>& objective, const std::vector<SparseRow>& rows,
                  const std::vector<Rational>& rhs) {
  Tableau t(objective);
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(rows[i], rhs[i]);
  t.solve();
  return {t.value(), t.solution()};
}

}  // namespace isopoly::lp
