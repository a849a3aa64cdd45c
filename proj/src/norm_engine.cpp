#include "isopoly/norm_engine.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "isopoly/cutting_plane.hpp"
#include "isopoly/errors.hpp"
#include "isopoly/simplex.hpp"

namespace isopoly {

namespace {

struct Candidate {
  Index coordinate;
  Index position;
  Rational value;
};

// Atoms that can appear in some maximizer. An atom j is useless when another atom j'
// in the same block has |x|(j') >= |x|(j) and pos(j') >= pos(j): the deeper segment
// makes fewer profiles catch the atom, so swapping j for j' keeps the measure in M and
// does not lower its value. Scanning from the deepest position keeps strict records.
std::vector<Candidate> pareto_atoms(std::vector<Candidate> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Candidate& a, const Candidate& b) { return a.position > b.position; });
  std::vector<Candidate> kept;
  for (auto& atom : atoms) {
    if (kept.empty() || atom.value > kept.back().value) kept.push_back(std::move(atom));
  }
  return kept;
}

// All partitions of {0..m-1} into exactly k non-empty groups, as restricted growth strings.
void partitions_exact(std::size_t m, std::size_t k, std::vector<std::size_t>& label, std::size_t used,
                      std::vector<std::vector<std::size_t>>& out) {
  const std::size_t i = label.size();
  if (i == m) {
    if (used == k) out.push_back(label);
    return;
  }
  if (k - used > m - i) return;
  for (std::size_t g = 0; g < used; ++g) {
    label.push_back(g);
    partitions_exact(m, k, label, used, out);
    label.pop_back();
  }
  if (used < k) {
    label.push_back(used);
    partitions_exact(m, k, label, used + 1, out);
    label.pop_back();
  }
}

struct WeightProgram {
  Rational value;
  std::vector<Rational> weights;
};

// max sum c_i w_i over w >= 0 with group sums <= 1 and sum_{i in S} w_i <= 1 for every
// Z-feasible S; the Z rows are generated on demand by the subset oracle. `cuts` seeds the
// program with subsets known to be feasible and collects the new ones.
WeightProgram solve_weights(const std::vector<Rational>& c, const std::vector<std::size_t>& group,
                            std::size_t groups, const std::vector<ZItem>& base_items, const BaseSpaceId& space,
                            std::vector<std::vector<int>>& cuts) {
  const std::size_t m = c.size();
  lp::Tableau tableau(c);
  std::vector<lp::SparseRow> rows(groups);
  for (std::size_t i = 0; i < m; ++i) rows[group[i]].emplace_back(i, Rational(1));
  for (const auto& row : rows) tableau.add_row(row, 1);
  for (const auto& chosen : cuts) {
    lp::SparseRow cut;
    for (int i : chosen) cut.emplace_back(static_cast<std::size_t>(i), Rational(1));
    tableau.add_row(cut, 1);
  }
  std::vector<ZItem> items = base_items;
  while (true) {
    tableau.solve();
    std::vector<Rational> w = tableau.solution();
    for (std::size_t i = 0; i < m; ++i) items[i].weight = w[i];
    ZSubset worst = best_feasible_subset(items, space);
    if (worst.value <= 1) return {tableau.value(), std::move(w)};
    lp::SparseRow cut;
    for (int i : worst.chosen) cut.emplace_back(static_cast<std::size_t>(i), Rational(1));
    tableau.add_row(cut, 1);
    cuts.push_back(worst.chosen);
  }
}

struct Best {
  Rational value;
  std::vector<int> blocks;
  std::vector<Index> coordinates;
  std::vector<Rational> weights;
  std::vector<std::size_t> group;
  std::size_t groups = 0;
};

}  // namespace

NormCertificate norm_M(const SparseVector& x, const BaseSpaceId& space, const BlockSystem& blocks,
                       const NormOptions& options) {
  NormCertificate cert;
  const SparseVector a = x.abs();
  cert.value = 0;
  for (const auto& [j, v] : a) {
    if (v > cert.value) {
      cert.value = v;
      cert.maximizer = MMember::unit(j);
    }
  }

  std::map<int, std::vector<Candidate>> by_block;
  for (const auto& [j, v] : a) {
    if (auto n = blocks.block_of(j)) by_block[*n].push_back({j, blocks.position(j), v});
  }
  std::vector<int> touched;
  std::vector<std::vector<Candidate>> candidates;
  for (auto& [n, atoms] : by_block) {
    touched.push_back(n);
    candidates.push_back(pareto_atoms(std::move(atoms)));
  }

  Best best{cert.value, {}, {}, {}, {}, 0};
  bool found_measure = false;
  for (std::size_t first = 0; first < touched.size() && cert.exhaustive; ++first) {
    const std::size_t m = touched.size() - first;
    const auto K = static_cast<std::size_t>(blocks.block(touched[first]).start);
    std::vector<std::vector<std::size_t>> groupings;
    std::size_t groups = 0;
    if (m <= K) {
      std::vector<std::size_t> singletons(m);
      for (std::size_t i = 0; i < m; ++i) singletons[i] = i;
      groupings.push_back(singletons);
      groups = m;
    } else {
      // Coarser partitions only add constraints, so exactly K groups suffice.
      std::vector<std::size_t> label;
      partitions_exact(m, K, label, 0, groupings);
      groups = K;
    }

    // Branch over atom choices block by block. Unassigned blocks are relaxed to their
    // largest value and deepest position; the program value is monotone in both, so
    // the relaxation bounds every completion. Fixing an atom only lowers ratios, so every
    // subset feasible at a node stays feasible below it and its cut is inherited.
    std::vector<Rational> top_value(m), top_ratio(m);
    for (std::size_t i = 0; i < m; ++i) {
      const int n = touched[first + i];
      for (const Candidate& atom : candidates[first + i]) {
        top_value[i] = std::max(top_value[i], atom.value);
        top_ratio[i] = std::max(top_ratio[i], ratio(atom.position, blocks.block(n).length));
      }
    }
    for (const auto& group : groupings) {
      if (!cert.exhaustive) break;
      std::vector<Rational> c = top_value;
      std::vector<ZItem> items(m);
      for (std::size_t i = 0; i < m; ++i) items[i] = {touched[first + i], top_ratio[i], Rational(0)};
      std::vector<std::size_t> pick(m, 0);
      std::function<void(std::size_t, std::vector<std::vector<int>>)> branch =
          [&](std::size_t i, std::vector<std::vector<int>> cuts) {
        if (!cert.exhaustive) return;
        std::vector<Rational> group_max(groups, Rational(0));
        for (std::size_t t = 0; t < m; ++t) group_max[group[t]] = std::max(group_max[group[t]], c[t]);
        Rational relaxed = 0;
        for (const auto& g : group_max) relaxed += g;
        if (relaxed <= best.value) return;
        if (cert.programs >= options.program_budget) {
          cert.exhaustive = false;
          return;
        }
        ++cert.programs;
        WeightProgram program = solve_weights(c, group, groups, items, space, cuts);
        if (program.value <= best.value) return;
        if (i == m) {
          found_measure = true;
          best.value = program.value;
          best.blocks.assign(touched.begin() + static_cast<long>(first), touched.end());
          best.coordinates.clear();
          for (std::size_t t = 0; t < m; ++t) best.coordinates.push_back(candidates[first + t][pick[t]].coordinate);
          best.weights = program.weights;
          best.group = group;
          best.groups = groups;
          return;
        }
        const int n = touched[first + i];
        // Shallow atoms first: larger values tend to raise the incumbent early.
        for (std::size_t k = candidates[first + i].size(); k-- > 0;) {
          const Candidate& atom = candidates[first + i][k];
          pick[i] = k;
          c[i] = atom.value;
          items[i].ratio = ratio(atom.position, blocks.block(n).length);
          branch(i + 1, cuts);
        }
        c[i] = top_value[i];
        items[i].ratio = top_ratio[i];
      };
      branch(0, {});
    }
    if (m <= K) break;  // later starting blocks give sub-programs of this one
  }

  if (found_measure) {
    MDecomposition d;
    std::vector<AtomicMeasure> parts(best.groups);
    AtomicMeasure mu;
    for (std::size_t i = 0; i < best.blocks.size(); ++i) {
      if (sgn(best.weights[i]) == 0) continue;
      parts[best.group[i]].set(best.blocks[i], best.coordinates[i], best.weights[i]);
      mu.set(best.blocks[i], best.coordinates[i], best.weights[i]);
    }
    for (auto& part : parts) {
      if (!part.empty()) d.parts.push_back(std::move(part));
    }
    d.zbound = zbounded_optimum(mu, space, blocks);
    cert.value = best.value;
    cert.maximizer = MMember::measure(std::move(d));
  }
  return cert;
}

NormCertificate exact_norm_M(const SparseVector& x, const BaseSpaceId& space, const BlockSystem& blocks,
                             const NormOptions& options) {
  NormCertificate cert = norm_M(x, space, blocks, options);
  if (!cert.exhaustive) {
    throw BudgetExceeded("norm search exceeded " + std::to_string(options.program_budget) +
                         " weight programs; best lower bound " + format_rational(cert.value));
  }
  return cert;
}

std::string certificate_violation(const NormCertificate& cert, const SparseVector& x, const BaseSpaceId& space,
                                  const BlockSystem& blocks) {
  const SparseVector a = x.abs();
  if (cert.value < a.sup_norm()) return "value below the sup norm";
  if (cert.maximizer.evaluate(a) != cert.value) return "maximizer does not attain the stated value";
  switch (cert.maximizer.kind) {
    case MMember::Kind::Zero:
      return a.empty() ? "" : "zero maximizer for a nonzero vector";
    case MMember::Kind::Coordinate:
      return "";
    case MMember::Kind::Measure: {
      const auto& d = cert.maximizer.decomposition;
      for (const auto& part : d.parts) {
        if (!structural_violation(part, blocks).empty()) return "part is not a member of P";
        if (!in_P1(part)) return "part has mass above 1";
      }
      if (!is_admissible(d.parts, blocks)) return "parts are not admissible";
      if (!is_zbounded(d.combined(), space, blocks)) return "maximizer is not Z-bounded";
      return "";
    }
  }
  return "unknown maximizer kind";
}

DualNormCertificate dual_norm_M(const SparseVector& f, const BaseSpaceId& space, const BlockSystem& blocks,
                                const DualNormOptions& options) {
  CuttingPlaneOptions cp;
  cp.precision = options.precision;
  cp.max_iterations = options.max_iterations;

  // When |f| is constant on a whole block, some maximizer is non-increasing along that
  // block: moving larger values to shallower positions never raises ||.||_M.
  const SparseVector weights = f.abs();
  for (int n = 1; n <= blocks.depth(); ++n) {
    const Block& b = blocks.block(n);
    const Rational first = weights.get(b.start);
    if (sgn(first) == 0) continue;
    bool constant = true;
    for (Index j = b.start + 1; j <= b.end() && constant; ++j) constant = weights.get(j) == first;
    if (!constant) continue;
    for (Index j = b.start; j < b.end(); ++j) {
      SparseVector row;
      row.set(j + 1, 1);
      row.set(j, -1);
      cp.side_constraints.push_back({row, Rational(0)});
    }
  }
  cp.validate_cut = [&](const SparseVector& cut) {
    if (!in_M(cut, space, blocks)) throw Error("separation produced a functional outside M: " + format_vector(cut));
  };
  SeparationOracle oracle = [&](const SparseVector& point) {
    NormCertificate cert = exact_norm_M(point, space, blocks, options.norm);
    return Separation{cert.value, cert.maximizer.functional()};
  };
  BallMaximum run = maximize_over_ball(f, oracle, cp);
  return {run.value, run.witness, std::move(run.cuts), run.iterations, run.exact};
}

bool check_suppression_unconditional(const SparseVector& x, const std::vector<FiniteSet>& subsets,
                                     const BaseSpaceId& space, const BlockSystem& blocks) {
  const Rational full = exact_norm_M(x, space, blocks).value;
  for (const FiniteSet& F : subsets) {
    const SparseVector part = x.restricted([&](Index j) { return F.contains(j); });
    if (exact_norm_M(part, space, blocks).value > full) return false;
  }
  return true;
}

}  // namespace isopoly
