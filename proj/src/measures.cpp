#include "isopoly/measures.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "isopoly/errors.hpp"

namespace isopoly {

void AtomicMeasure::set(int block, Index coordinate, const Rational& weight) {
  if (block < 1) throw InvalidArgument("block index must be positive");
  if (coordinate < 1) throw InvalidArgument("atom coordinate must be positive");
  if (weight < 0 || weight > 1) throw InvalidArgument("atom weight " + format_rational(weight) + " outside [0,1]");
  if (weight == 0) {
    atoms_.erase(block);
    return;
  }
  atoms_[block] = Atom{coordinate, weight};
}

std::vector<int> AtomicMeasure::touched_blocks() const {
  std::vector<int> out;
  for (const auto& [n, atom] : atoms_) out.push_back(n);
  return out;
}

Rational AtomicMeasure::total_mass() const {
  Rational sum = 0;
  for (const auto& [n, atom] : atoms_) sum += atom.weight;
  return sum;
}

Index AtomicMeasure::min_support() const {
  if (atoms_.empty()) throw InvalidArgument("zero measure has no support");
  return atoms_.begin()->second.coordinate;
}

SparseVector AtomicMeasure::functional() const {
  SparseVector f;
  for (const auto& [n, atom] : atoms_) f.add(atom.coordinate, atom.weight);
  return f;
}

Rational AtomicMeasure::evaluate(const SparseVector& x) const {
  Rational sum = 0;
  for (const auto& [n, atom] : atoms_) sum += atom.weight * x.get(atom.coordinate);
  return sum;
}

std::string structural_violation(const AtomicMeasure& mu, const BlockSystem& blocks) {
  for (const auto& [n, atom] : mu.atoms()) {
    if (n > blocks.depth()) return "block " + std::to_string(n) + " is not materialized";
    if (!blocks.block(n).contains(atom.coordinate)) {
      return "atom " + std::to_string(atom.coordinate) + " is not in F_" + std::to_string(n);
    }
    if (!(atom.weight > 0 && atom.weight <= 1)) return "weight outside (0,1]";
  }
  return {};
}

std::optional<AtomicMeasure> measure_from_functional(const SparseVector& f, const BlockSystem& blocks) {
  AtomicMeasure mu;
  for (const auto& [j, value] : f) {
    auto n = blocks.block_of(j);
    if (!n || value < 0 || value > 1 || mu.atoms().contains(*n)) return std::nullopt;
    mu.set(*n, j, value);
  }
  return mu;
}

SparseVector profile_vector(const SegmentProfile& profile, const BlockSystem& blocks) {
  SparseVector z;
  for (const auto& [n, g] : profile) {
    const Block& b = blocks.block(n);
    if (g < 0 || g > b.length) throw InvalidArgument("segment length outside [0, |F_n|]");
    z.add(n, ratio(g, b.length));
  }
  return z;
}

Rational profile_mass(const AtomicMeasure& mu, const SegmentProfile& profile, const BlockSystem& blocks) {
  Rational sum = 0;
  for (const auto& [n, atom] : mu.atoms()) {
    auto it = profile.find(n);
    if (it != profile.end() && it->second >= blocks.position(atom.coordinate)) sum += atom.weight;
  }
  return sum;
}

namespace {

struct SubsetSearch {
  const std::vector<ZItem>& items;
  const BaseSpaceId& space;
  std::vector<std::size_t> order;
  std::vector<Rational> suffix_weight;
  std::vector<int> current;
  SparseVector z;
  Rational value = 0;
  ZSubset best{Rational(0), {}};

  void run(std::size_t depth) {
    if (value > best.value) {
      best.value = value;
      best.chosen = current;
    }
    if (depth == order.size()) return;
    if (value + suffix_weight[depth] <= best.value) return;
    const ZItem& item = items[order[depth]];
    // Inclusion branch. The Z-norm is monotone in each coordinate, so once the
    // vector leaves the ball no superset can return to it.
    z.add(item.block, item.ratio);
    if (ball_member(space, z) != BallPosition::Outside) {
      current.push_back(static_cast<int>(order[depth]));
      value += item.weight;
      run(depth + 1);
      value -= item.weight;
      current.pop_back();
    }
    z.add(item.block, -item.ratio);
    run(depth + 1);
  }
};

}  // namespace

ZSubset best_feasible_subset(const std::vector<ZItem>& items, const BaseSpaceId& space) {
  SubsetSearch search{items, space, {}, {}, {}, {}};
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].weight > 0) search.order.push_back(i);
  }
  std::stable_sort(search.order.begin(), search.order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].weight > items[b].weight; });
  search.suffix_weight.assign(search.order.size() + 1, Rational(0));
  for (std::size_t d = search.order.size(); d-- > 0;) {
    search.suffix_weight[d] = search.suffix_weight[d + 1] + items[search.order[d]].weight;
  }
  search.run(0);
  std::sort(search.best.chosen.begin(), search.best.chosen.end());
  return search.best;
}

bool in_P1(const AtomicMeasure& mu) { return mu.total_mass() <= 1; }

// Only G_n reaching the atom j_n gains mass, and G_n = {first pos(j_n) elements} is the
// shortest such segment; any longer one only enlarges the Z-vector. So the optimum over
// profiles is a subset selection with g_n in {0, pos(j_n)}.
ZBoundResult zbounded_optimum(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks) {
  if (std::string why = structural_violation(mu, blocks); !why.empty()) throw InvalidArgument(why);
  std::vector<ZItem> items;
  std::vector<Index> positions;
  for (const auto& [n, atom] : mu.atoms()) {
    positions.push_back(blocks.position(atom.coordinate));
    items.push_back({n, ratio(positions.back(), blocks.block(n).length), atom.weight});
  }
  ZSubset best = best_feasible_subset(items, space);
  ZBoundResult result{ScalarBound::exact(best.value), {}};
  for (int i : best.chosen) result.witness[items[i].block] = positions[i];
  return result;
}

bool is_zbounded(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks) {
  return zbounded_optimum(mu, space, blocks).value.upper <= 1;
}

bool is_admissible(const std::vector<AtomicMeasure>& parts, const BlockSystem& blocks) {
  std::map<int, std::size_t> owner;
  std::set<Index> coordinates;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) return false;
    for (const auto& [n, atom] : parts[i].atoms()) {
      if (!owner.emplace(n, i).second) return false;
      if (!coordinates.insert(atom.coordinate).second) return false;
    }
  }
  const Index k = static_cast<Index>(parts.size());
  for (const auto& [n, i] : owner) {
    if (k > blocks.block(n).start) return false;
  }
  return true;
}

AtomicMeasure MDecomposition::combined() const {
  AtomicMeasure mu;
  for (const auto& part : parts) {
    for (const auto& [n, atom] : part.atoms()) mu.set(n, atom.coordinate, atom.weight);
  }
  return mu;
}

SparseVector MMember::functional() const {
  switch (kind) {
    case Kind::Zero:
      return {};
    case Kind::Coordinate:
      return SparseVector::unit(coordinate);
    case Kind::Measure:
      return decomposition.combined().functional();
  }
  return {};
}

namespace {

// Packs block masses into at most `capacity` unit bins; a new bin is opened only
// at the next free index, so partitions are visited in lexicographic order.
struct Packer {
  std::vector<Rational> masses;
  std::size_t capacity;
  std::vector<Rational> loads;
  std::vector<std::size_t> assignment;
  std::vector<Rational> suffix;

  bool run(std::size_t i) {
    if (i == masses.size()) return true;
    Rational room = Rational(static_cast<long>(capacity - loads.size()));
    for (const auto& load : loads) room += 1 - load;
    if (suffix[i] > room) return false;
    for (std::size_t b = 0; b < loads.size(); ++b) {
      if (loads[b] + masses[i] <= 1) {
        loads[b] += masses[i];
        assignment[i] = b;
        if (run(i + 1)) return true;
        loads[b] -= masses[i];
      }
    }
    if (loads.size() < capacity) {
      loads.push_back(masses[i]);
      assignment[i] = loads.size() - 1;
      if (run(i + 1)) return true;
      loads.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<MDecomposition> in_M(const AtomicMeasure& mu, const BaseSpaceId& space, const BlockSystem& blocks) {
  if (std::string why = structural_violation(mu, blocks); !why.empty()) throw InvalidArgument(why);
  MDecomposition d;
  if (mu.empty()) return d;
  d.zbound = zbounded_optimum(mu, space, blocks);
  if (d.zbound.value.upper > 1) return std::nullopt;

  const int first = mu.atoms().begin()->first;
  const auto limit = static_cast<std::size_t>(std::min<Index>(blocks.block(first).start, static_cast<Index>(mu.size())));
  Packer packer{{}, limit, {}, {}, {}};
  for (const auto& [n, atom] : mu.atoms()) packer.masses.push_back(atom.weight);
  packer.assignment.assign(packer.masses.size(), 0);
  packer.suffix.assign(packer.masses.size() + 1, Rational(0));
  for (std::size_t i = packer.masses.size(); i-- > 0;) packer.suffix[i] = packer.suffix[i + 1] + packer.masses[i];
  if (!packer.run(0)) return std::nullopt;

  d.parts.assign(packer.loads.size(), AtomicMeasure{});
  std::size_t i = 0;
  for (const auto& [n, atom] : mu.atoms()) d.parts[packer.assignment[i++]].set(n, atom.coordinate, atom.weight);
  return d;
}

std::optional<MMember> in_M(const SparseVector& f, const BaseSpaceId& space, const BlockSystem& blocks) {
  if (f.empty()) return MMember::zero();
  if (f.size() == 1 && f.begin()->second == 1) return MMember::unit(f.begin()->first);
  auto mu = measure_from_functional(f, blocks);
  if (!mu) return std::nullopt;
  auto d = in_M(*mu, space, blocks);
  if (!d) return std::nullopt;
  return MMember::measure(std::move(*d));
}

AtomicMeasure restrict(const AtomicMeasure& mu, const FiniteSet& coordinates) {
  AtomicMeasure out;
  for (const auto& [n, atom] : mu.atoms()) {
    if (coordinates.contains(atom.coordinate)) out.set(n, atom.coordinate, atom.weight);
  }
  return out;
}

P1Decomposition p1_decompose(const MMember& member) {
  P1Decomposition out;
  std::vector<Index> labels;
  if (member.kind == MMember::Kind::Coordinate) {
    labels.push_back(member.coordinate);
    out.pieces.push_back({member.coordinate, SparseVector::unit(member.coordinate)});
  } else if (member.kind == MMember::Kind::Measure) {
    for (const auto& part : member.decomposition.parts) {
      if (part.empty()) continue;
      out.pieces.push_back({part.min_support(), part.functional()});
    }
    std::sort(out.pieces.begin(), out.pieces.end(),
              [](const P1Piece& a, const P1Piece& b) { return a.label < b.label; });
    for (const auto& piece : out.pieces) labels.push_back(piece.label);
  }
  try {
    out.labels = FiniteSet(labels);
  } catch (const Error& e) {
    throw DecompositionFailure(std::string("piece labels are not distinct: ") + e.what());
  }
  if (std::string why = p1_violation(out); !why.empty()) throw DecompositionFailure(why);
  return out;
}

std::string p1_violation(const P1Decomposition& d) {
  if (!is_S1(d.labels)) return "labels " + format_set(d.labels) + " are not in S_1";
  if (d.labels.size() != d.pieces.size()) return "one piece per label expected";
  for (const auto& piece : d.pieces) {
    if (!d.labels.contains(piece.label)) return "piece label missing from label set";
    if (piece.functional.l1_norm() > 1) return "piece " + std::to_string(piece.label) + " has mass above 1";
    if (!piece.functional.empty() && piece.functional.min_index() < piece.label) {
      return "piece " + std::to_string(piece.label) + " starts before its label";
    }
  }
  return {};
}

AtomicMeasure parse_measure(std::string_view text) {
  static const std::regex triple(R"(^\s*(\d+)\s*:\s*\(\s*(\d+)\s*,\s*([^)\s]+)\s*\)\s*$)");
  AtomicMeasure mu;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(item, m, triple)) throw ParseError("bad measure triple '" + item + "'");
    const int n = std::stoi(m[1].str());
    if (mu.atoms().contains(n)) throw ParseError("block " + m[1].str() + " listed twice");
    const Rational w = parse_rational(m[3].str());
    if (!(w > 0 && w <= 1)) throw ParseError("weight outside (0,1] in '" + item + "'");
    mu.set(n, std::stoll(m[2].str()), w);
  }
  return mu;
}

std::string format_measure(const AtomicMeasure& mu) {
  std::string out;
  for (const auto& [n, atom] : mu.atoms()) {
    if (!out.empty()) out += "; ";
    out += std::to_string(n) + ":(" + std::to_string(atom.coordinate) + "," + format_rational(atom.weight) + ")";
  }
  return out;
}

std::string format_profile(const SegmentProfile& profile) {
  std::string out;
  for (const auto& [n, g] : profile) {
    if (!out.empty()) out += ",";
    out += std::to_string(n) + ":" + std::to_string(g);
  }
  return out;
}

}  // namespace isopoly
