#include "isopoly/cutting_plane.hpp"

#include <algorithm>
#include <unordered_map>

#include "isopoly/errors.hpp"
#include "isopoly/simplex.hpp"

namespace isopoly {

namespace {

lp::SparseRow to_row(const SparseVector& functional, const std::unordered_map<Index, std::size_t>& column) {
  lp::SparseRow row;
  for (const auto& [i, v] : functional) {
    auto it = column.find(i);
    if (it != column.end()) row.emplace_back(it->second, v);
  }
  return row;
}

}  // namespace

BallMaximum maximize_over_ball(const SparseVector& f, const SeparationOracle& oracle,
                               const CuttingPlaneOptions& options) {
  BallMaximum result;
  if (f.empty()) {
    result.value = ScalarBound::exact(0);
    result.exact = true;
    return result;
  }
  const SparseVector weights = f.abs();
  const std::vector<Index> coords = weights.support();
  std::unordered_map<Index, std::size_t> column;
  std::vector<Rational> objective;
  for (std::size_t c = 0; c < coords.size(); ++c) {
    column.emplace(coords[c], c);
    objective.push_back(weights.get(coords[c]));
  }

  lp::Tableau tableau(objective);
  for (std::size_t c = 0; c < coords.size(); ++c) tableau.add_row({{c, Rational(1)}}, 1);
  for (const SideConstraint& side : options.side_constraints) {
    tableau.add_row(to_row(side.coefficients, column), side.rhs);
  }

  auto signed_point = [&](const std::vector<Rational>& x, const Rational& factor) {
    SparseVector point;
    for (std::size_t c = 0; c < coords.size(); ++c) {
      if (sgn(x[c]) == 0) continue;
      point.set(coords[c], sgn(f.get(coords[c])) < 0 ? Rational(-x[c] * factor) : Rational(x[c] * factor));
    }
    return point;
  };

  for (std::size_t iter = 1;; ++iter) {
    tableau.solve();
    result.iterations = iter;
    const std::vector<Rational> x = tableau.solution();
    SparseVector point;
    for (std::size_t c = 0; c < coords.size(); ++c) {
      if (sgn(x[c]) != 0) point.set(coords[c], x[c]);
    }
    const Rational upper = tableau.value();
    Separation sep = oracle(point);
    if (sep.norm <= 1) {
      result.value = ScalarBound::exact(upper);
      result.witness = signed_point(x, 1);
      result.exact = true;
      return result;
    }
    const Rational lower = upper / sep.norm;
    if (upper - lower <= options.precision) {
      result.value = {lower, upper};
      result.witness = signed_point(x, 1 / sep.norm);
      return result;
    }
    if (iter >= options.max_iterations) {
      throw IterationCap("cutting-plane loop reached " + std::to_string(iter) + " iterations",
                         ScalarBound{lower, upper});
    }
    if (options.validate_cut) options.validate_cut(sep.functional);
    if (sep.functional.dot(point) != sep.norm) {
      throw Error("separation oracle returned a functional that does not attain the norm");
    }
    tableau.add_row(to_row(sep.functional, column), 1);
    result.cuts.push_back(std::move(sep.functional));
  }
}

}  // namespace isopoly
