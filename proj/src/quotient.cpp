#include "isopoly/quotient.hpp"

#include <algorithm>
#include <set>

#include "isopoly/errors.hpp"

namespace isopoly {

namespace {

void require_block(int n, const BlockSystem& blocks) {
  if (n < 1 || n > blocks.depth()) {
    throw InvalidArgument("block index " + std::to_string(n) + " outside 1.." + std::to_string(blocks.depth()));
  }
}

void require_coefficients(const SparseVector& a, const BlockSystem& blocks) {
  for (const auto& [n, v] : a) require_block(static_cast<int>(n), blocks);
}

void hypothesis(bool ok, const std::string& what) {
  if (!ok) throw HypothesisFailed(what);
}

void require_materialized(const SparseVector& a, const BlockSystem& blocks) {
  for (const auto& [n, v] : a) {
    hypothesis(n >= 1 && n <= blocks.depth(), "coefficient index " + std::to_string(n) + " beyond depth " +
                                                  std::to_string(blocks.depth()));
  }
}

Rational block_ratio(int n, Index g, const BlockSystem& blocks) { return ratio(g, blocks.block(n).length); }

// Exact sign of r - phi(k0)^e; bounds are used when phi has no closed form.
int compare_with_phi_power(const Rational& r, unsigned long e, const ParameterLedger& ledger) {
  if (ledger.phi_k0.exact) return compare(Surd::of(r), surd_pow(*ledger.phi_k0.exact, e));
  if (r <= rational_pow(ledger.phi_k0.bound.lower, e)) return -1;
  if (r > rational_pow(ledger.phi_k0.bound.upper, e)) return 1;
  throw Indeterminate("phi(k0) enclosure too wide to compare " + format_rational(r));
}

Rational level_mass_on_block(const SparseVector& u, int i, int level, const Setting& s);

DualNormOptions dual_options(const Setting& s) {
  DualNormOptions options;
  options.precision = s.precision;
  return options;
}

}  // namespace

SparseVector u_star(int n, const BlockSystem& blocks) {
  require_block(n, blocks);
  const Block& b = blocks.block(n);
  SparseVector f;
  for (Index j = b.start; j <= b.end(); ++j) f.set(j, Rational(1, b.length));
  return f;
}

SparseVector u_star_combination(const SparseVector& a, const BlockSystem& blocks) {
  require_coefficients(a, blocks);
  SparseVector f;
  for (const auto& [n, v] : a) f = f + u_star(static_cast<int>(n), blocks).scaled(v);
  return f;
}

SparseVector apply_Q(const SparseVector& x, const BlockSystem& blocks) {
  SparseVector z;
  for (const auto& [j, v] : x) {
    if (auto n = blocks.block_of(j)) z.add(*n, v / blocks.block(*n).length);
  }
  return z;
}

SparseVector adjoint_functional(int n, const BlockSystem& blocks) {
  hypothesis(n >= 1 && n <= blocks.depth(), "block " + std::to_string(n) + " is not materialized");
  SparseVector f;
  const Index last = blocks.block(blocks.depth()).end() + 1;
  for (Index j = 1; j <= last; ++j) f.set(j, apply_Q(SparseVector::unit(j), blocks).get(n));
  return f;
}

bool verify_adjoint(int n, const BlockSystem& blocks) {
  const SparseVector adjoint = adjoint_functional(n, blocks);
  return adjoint == u_star(n, blocks);
}

bool verify_adjoint_candidate(int n, const SparseVector& candidate, const BlockSystem& blocks) {
  return adjoint_functional(n, blocks) == candidate;
}

SparseVector segment_indicator(const SegmentProfile& profile, const BlockSystem& blocks) {
  SparseVector u;
  for (const auto& [n, g] : profile) {
    require_block(n, blocks);
    if (g < 0 || g > blocks.block(n).length) throw InvalidArgument("segment longer than its block");
    for (Index j = blocks.block(n).start; j < blocks.block(n).start + g; ++j) u.set(j, 1);
  }
  return u;
}

Verdict verify_L1(const FiniteSet& I, const SegmentProfile& profile, const Setting& s) {
  for (const auto& [n, g] : profile) {
    if (!I.contains(n)) throw InvalidArgument("profile block " + std::to_string(n) + " not in I");
  }
  const SparseVector z = profile_vector(profile, s.blocks);
  hypothesis(ball_member(s.space, z) != BallPosition::Outside,
             "profile vector " + format_vector(z) + " lies outside the unit ball of Z");
  const SparseVector u = segment_indicator(profile, s.blocks);
  const NormCertificate cert = exact_norm_M(u, s.space, s.blocks);
  Verdict v;
  v.record("norm", cert.value);
  v.require(cert.value <= 1, "norm<=1");
  if (!u.empty()) v.require(cert.value == 1, "norm==1");
  return v;
}

L2Witness l2_witness(const SparseVector& a_in, const Setting& s) {
  require_coefficients(a_in, s.blocks);
  const SparseVector a = a_in.abs();
  L2Witness w;
  if (a.empty()) return w;
  const Rational width(1, Integer(1) << 96);

  // Norming vector of the l_q norm of `weights` in l_p, rounded down.
  auto lp_norming = [&](const SparseVector& weights, Index r, Index sden) {
    SparseVector b;
    const unsigned long q_root = static_cast<unsigned long>(r - sden);
    Rational sum_upper = 0;  // sum w^q, q = r/(r-s)
    for (const auto& [i, v] : weights) sum_upper += root_upper(rational_pow(v, static_cast<unsigned long>(r)), q_root, width);
    // ||w||_q^{q-1} = (sum w^q)^{s/r}
    const Rational scale = root_upper(rational_pow(sum_upper, static_cast<unsigned long>(sden)), static_cast<unsigned long>(r), width);
    for (const auto& [i, v] : weights) {
      // w^{q-1} = w^{s/(r-s)}
      b.set(i, root_lower(rational_pow(v, static_cast<unsigned long>(sden)), q_root, width) / scale);
    }
    return b;
  };

  switch (s.space.kind) {
    case SpaceKind::C0:
      for (const auto& [i, v] : a) w.b.set(i, 1);
      break;
    case SpaceKind::Lp:
      w.b = lp_norming(a, s.space.p_num, s.space.p_den);
      break;
    case SpaceKind::C0SumLp: {
      SparseVector group_sums;
      for (const auto& [i, v] : a) group_sums.add(s.space.group_of(i), v);
      const SparseVector gb = lp_norming(group_sums, s.space.p_num, s.space.p_den);
      for (const auto& [i, v] : a) w.b.set(i, gb.get(s.space.group_of(i)));
      break;
    }
    default:
      throw InvalidArgument("no norming-vector recipe for " + format_space(s.space));
  }
  if (ball_member(s.space, w.b) == BallPosition::Outside) throw Error("rounded norming vector left the ball");
  w.pairing = a.dot(w.b);
  for (const auto& [i, bi] : w.b) {
    const int n = static_cast<int>(i);
    const Index g = floor_of(bi * s.blocks.block(n).length).get_si();
    if (g > 0) w.profile[n] = g;
  }
  w.u = segment_indicator(w.profile, s.blocks);
  w.value = 0;
  for (const auto& [n, g] : w.profile) w.value += a.get(n) * block_ratio(n, g, s.blocks);
  return w;
}

Verdict verify_L2_lowerbound(const SparseVector& a, const Setting& s) {
  require_materialized(a, s.blocks);
  Verdict v;
  const SparseVector f = u_star_combination(a, s.blocks);
  const DualNormCertificate dm = dual_norm_M(f, s.space, s.blocks, dual_options(s));
  const ScalarBound zs = dual_norm(s.space, a, s.precision);
  const Rational A = s.A();
  v.record("dual_M_lower", dm.value.lower);
  v.record("dual_M_upper", dm.value.upper);
  v.record("dual_Z_upper", zs.upper);
  v.record("A", A);
  v.require(dm.value.lower >= A * zs.upper, "lower_bound");
  if (a.nonnegative() && !a.empty()) {
    // Normalize so that ||a||_{Z*} <= 1 and run the segment recipe.
    const SparseVector a_hat = a.scaled(1 / zs.upper);
    const L2Witness w = l2_witness(a_hat, s);
    Rational mass = 0;
    for (const auto& [n, c] : a) mass += Rational(1, s.blocks.block(static_cast<int>(n)).length);
    const NormCertificate u_norm = exact_norm_M(w.u, s.space, s.blocks);
    v.record("witness_norm", u_norm.value);
    v.record("witness_value", w.value);
    v.require(u_norm.value <= 1, "witness_in_ball");
    v.require(w.value >= w.pairing - mass, "segment_rounding");
    // f(u) <= ||f||_* together with the rounding estimate.
    const Rational f_u = f.dot(w.u);
    v.require(f_u <= dm.value.upper, "witness_below_dual");
    v.require(dm.value.upper >= zs.lower - zs.upper * mass, "intermediate");
  }
  return v;
}

L3Chunks l3_chunks(const AtomicMeasure& mu) {
  L3Chunks out;
  AtomicMeasure current;
  Rational load = 0;
  for (const auto& [n, atom] : mu.atoms()) {
    if (atom.weight >= Rational(1, 2)) {
      out.heavy.set(n, atom.coordinate, atom.weight);
      continue;
    }
    if (load + atom.weight > 1) {
      out.light.push_back(current);
      current = AtomicMeasure{};
      load = 0;
    }
    current.set(n, atom.coordinate, atom.weight);
    load += atom.weight;
  }
  if (!current.empty()) out.light.push_back(current);
  return out;
}

Verdict verify_L3(const AtomicMeasure& mu, const SparseVector& u, int n, const Setting& s) {
  if (std::string why = structural_violation(mu, s.blocks); !why.empty()) throw InvalidArgument(why);
  hypothesis(!mu.empty(), "measure is zero");
  hypothesis(n >= 0, "n must be non-negative");
  hypothesis(u.nonnegative(), "u has negative coordinates");
  const NormCertificate u_norm = exact_norm_M(u, s.space, s.blocks);
  hypothesis(u_norm.value <= 1, "||u||_M = " + format_rational(u_norm.value) + " exceeds 1");
  hypothesis(n < mu.atoms().begin()->first, "n is not below every touched block");
  const Rational eps = s.ledger.epsilon(n + 1);
  for (const auto& [i, atom] : mu.atoms()) {
    hypothesis(u.get(atom.coordinate) >= eps,
               "u(" + std::to_string(atom.coordinate) + ") below eps_" + std::to_string(n + 1));
  }
  hypothesis(is_zbounded(mu, s.space, s.blocks), "measure is not Z-bounded");

  Verdict v;
  const DualNormCertificate dm = dual_norm_M(mu.functional(), s.space, s.blocks, dual_options(s));
  v.record("dual_M_upper", dm.value.upper);
  v.require(dm.value.upper <= 2, "dual_norm<=2");

  const Rational d = 2 / eps;
  const L3Chunks chunks = l3_chunks(mu);
  v.record("heavy", std::to_string(chunks.heavy.size()));
  v.record("light_chunks", std::to_string(chunks.light.size()));
  v.require(Rational(static_cast<long>(chunks.heavy.size())) <= d, "heavy_count");
  std::vector<AtomicMeasure> singles;
  for (const auto& [i, atom] : chunks.heavy.atoms()) {
    AtomicMeasure one;
    one.set(i, atom.coordinate, atom.weight);
    singles.push_back(one);
  }
  v.require(singles.empty() || is_admissible(singles, s.blocks), "heavy_admissible");
  v.require(in_M(chunks.heavy, s.space, s.blocks).has_value(), "heavy_in_M");

  v.require(Rational(static_cast<long>(chunks.light.size())) <= d, "light_count");
  bool chunk_values = true;
  for (std::size_t r = 0; r + 1 < chunks.light.size(); ++r) {
    chunk_values = chunk_values && in_P1(chunks.light[r]) && chunks.light[r].evaluate(u) > eps / 2;
  }
  v.require(chunk_values, "light_chunk_values");
  AtomicMeasure light_total;
  for (const auto& c : chunks.light) {
    for (const auto& [i, atom] : c.atoms()) light_total.set(i, atom.coordinate, atom.weight);
  }
  v.require(chunks.light.empty() || is_admissible(chunks.light, s.blocks), "light_admissible");
  v.require(is_zbounded(light_total, s.space, s.blocks), "light_zbounded");
  v.require(in_M(light_total, s.space, s.blocks).has_value(), "light_in_M");
  return v;
}

Verdict verify_L4(const L4Instance& in, const Setting& s) {
  hypothesis(in.n >= 0, "n must be non-negative");
  hypothesis(in.u.nonnegative(), "u has negative coordinates");
  const NormCertificate u_norm = exact_norm_M(in.u, s.space, s.blocks);
  hypothesis(u_norm.value <= 1, "||u||_M = " + format_rational(u_norm.value) + " exceeds 1");
  hypothesis(in.I.empty() || in.n < in.I.min(), "n is not below min I");
  const Rational eps = s.ledger.epsilon(in.n + 1);
  for (Index i : in.I.elements()) {
    require_block(static_cast<int>(i), s.blocks);
    auto it = in.segments.find(static_cast<int>(i));
    hypothesis(it != in.segments.end() && it->second >= 1, "G_" + std::to_string(i) + " is empty");
    hypothesis(it->second <= s.blocks.block(static_cast<int>(i)).length, "G_i longer than F_i");
    const Index top = s.blocks.block(static_cast<int>(i)).start + it->second - 1;
    hypothesis(in.u.get(top) >= eps, "a_{max G_" + std::to_string(i) + "} below eps_{n+1}");
  }
  hypothesis(in.rho.nonnegative(), "rho has negative entries");
  require_coefficients(in.rho, s.blocks);
  hypothesis(dual_ball_member(s.space, in.rho) != BallPosition::Outside, "||sum rho_i z_i*||_{Z*} exceeds 1");

  const Rational delta = s.ledger.delta_at(in.n);
  std::set<int> used;
  Rational mass = 0;
  for (const auto& J : in.family) {
    SparseVector z;
    Rational weight = 0;
    for (int i : J) {
      hypothesis(in.I.contains(i), "family member leaves I");
      hypothesis(used.insert(i).second, "family members overlap");
      const Rational r = block_ratio(i, in.segments.at(i), s.blocks);
      z.add(i, r);
      weight += in.rho.get(i) * r;
    }
    hypothesis(ball_member(s.space, z) != BallPosition::Outside, "condition (1) fails for a family member");
    hypothesis(weight >= delta, "condition (2) fails for a family member");
    mass += weight;
  }

  Verdict v;
  const Integer floor_inv = floor_of(1 / delta);
  const Rational card_bound = (1 / eps) * (1 + Rational(floor_inv));
  v.record("family_size", std::to_string(in.family.size()));
  v.record("cardinality_bound", card_bound);
  v.require(Rational(static_cast<long>(in.family.size())) < card_bound, "cardinality");
  v.record("family_mass", mass);
  const Rational factor = 1 + 1 / delta;
  v.require(compare_with_phi_power(mass / factor, static_cast<unsigned long>(in.n + 1), s.ledger) <= 0, "mass");
  return v;
}

namespace {

int level_of(const Rational& value, const ParameterLedger& ledger) {
  int n = 0;
  while (value <= ledger.epsilon(n + 1)) ++n;
  return n;
}

Rational level_mass_on_block(const SparseVector& u, int i, int level, const Setting& s) {
  const Block& b = s.blocks.block(i);
  Rational sum = 0;
  for (auto it = u.entries().lower_bound(b.start); it != u.entries().end() && it->first <= b.end(); ++it) {
    if (level_of(it->second, s.ledger) == level) sum += it->second;
  }
  return sum / b.length;
}

bool is_bad(const std::vector<int>& J, const Level& L, const SparseVector& rho, const Rational& delta,
            const Setting& s) {
  Rational weight = 0;
  SparseVector z;
  for (int i : J) {
    const Rational r = block_ratio(i, L.segments.at(i), s.blocks);
    weight += rho.get(i) * r;
    z.add(i, r);
  }
  return weight >= delta && ball_member(s.space, z) != BallPosition::Outside;
}

// First bad subset of `pool` by size, then lexicographically.
std::optional<std::vector<int>> first_bad(const std::vector<int>& pool, const Level& L, const SparseVector& rho,
                                          const Rational& delta, const Setting& s) {
  for (std::size_t k = 1; k <= pool.size(); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    while (true) {
      std::vector<int> J;
      for (std::size_t t : idx) J.push_back(pool[t]);
      if (is_bad(J, L, rho, delta, s)) return J;
      std::size_t t = k;
      while (t > 0 && idx[t - 1] == pool.size() - k + t - 1) --t;
      if (t == 0) break;
      ++idx[t - 1];
      for (std::size_t r = t; r < k; ++r) idx[r] = idx[r - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace

LevelDecomposition l5_decompose(const SparseVector& u, const SparseVector& rho, const Setting& s) {
  hypothesis(u.nonnegative(), "u has negative coordinates");
  hypothesis(rho.nonnegative(), "rho has negative entries");
  require_coefficients(rho, s.blocks);
  const NormCertificate u_norm = exact_norm_M(u, s.space, s.blocks);
  hypothesis(u_norm.value <= 1, "||u||_M = " + format_rational(u_norm.value) + " exceeds 1");
  hypothesis(dual_ball_member(s.space, rho) != BallPosition::Outside, "||sum rho_i z_i*||_{Z*} exceeds 1");

  LevelDecomposition out;
  out.total = u_star_combination(rho, s.blocks).dot(u);

  std::map<int, std::set<int>> blocks_at_level;
  for (const auto& [j, a] : u) {
    auto i = s.blocks.block_of(j);
    if (!i || sgn(rho.get(*i)) == 0) continue;
    blocks_at_level[level_of(a, s.ledger)].insert(*i);
  }

  for (const auto& [n, touched] : blocks_at_level) {
    Level L;
    L.n = n;
    L.low_contribution = L.leftover_contribution = L.bad_contribution = L.bad_mass = L.leftover_on_u = 0;
    for (int i : touched) {
      if (i <= n) {
        L.low_blocks.push_back(i);
        L.low_contribution += rho.get(i) * level_mass_on_block(u, i, n, s);
        continue;
      }
      L.blocks.push_back(i);
      const Block& b = s.blocks.block(i);
      Index deepest = 0;
      for (auto it = u.entries().lower_bound(b.start); it != u.entries().end() && it->first <= b.end(); ++it) {
        if (level_of(it->second, s.ledger) == n) deepest = it->first;
      }
      L.deepest[i] = deepest;
      L.segments[i] = s.blocks.position(deepest);
    }

    const Rational delta = s.ledger.delta_at(n);
    std::vector<int> pool = L.blocks;
    while (auto J = first_bad(pool, L, rho, delta, s)) {
      for (int i : *J) pool.erase(std::find(pool.begin(), pool.end(), i));
      L.bad_family.push_back(*J);
    }
    for (const auto& J : L.bad_family) {
      for (int i : J) {
        L.bad_mass += rho.get(i) * block_ratio(i, L.segments.at(i), s.blocks);
        L.bad_contribution += rho.get(i) * level_mass_on_block(u, i, n, s);
      }
    }
    for (int i : pool) {
      L.leftover.set(i, L.deepest.at(i), rho.get(i) * block_ratio(i, L.segments.at(i), s.blocks));
      L.leftover_contribution += rho.get(i) * level_mass_on_block(u, i, n, s);
    }
    L.leftover_on_u = L.leftover.evaluate(u);
    out.levels.push_back(std::move(L));
  }
  return out;
}

Verdict verify_L5(const SparseVector& u, const SparseVector& rho, const Setting& s) {
  const LevelDecomposition d = l5_decompose(u, rho, s);
  const Rational k0(s.ledger.k0);
  Verdict v;
  Rational level_sum = 0;
  Rational bound_sum = 0;
  bool rounding = true, leftover_zb = true, leftover_ok = true, bad_sets = true, cardinality = true, bad_mass = true,
       bad_ok = true, low_ok = true, level_ok = true;
  for (const Level& L : d.levels) {
    const Rational eps = s.ledger.epsilon(L.n);
    const Rational delta = s.ledger.delta_at(L.n);
    // estimate: level mass on F_i <= (eps_n / eps_{n+1}) a_{j_i} |G_i| / |F_i|
    for (int i : L.blocks) {
      rounding = rounding && level_mass_on_block(u, i, L.n, s) <=
                                 k0 * u.get(L.deepest.at(i)) * block_ratio(i, L.segments.at(i), s.blocks);
    }
    // Maximality: every Z-feasible subset of the leftover weighs < delta_n, hence (1/delta_n) mu_n is Z-bounded.
    std::vector<ZItem> items;
    for (const auto& [i, atom] : L.leftover.atoms()) {
      items.push_back({i, block_ratio(i, L.segments.at(i), s.blocks), atom.weight});
    }
    const ZSubset heaviest = best_feasible_subset(items, s.space);
    leftover_zb = leftover_zb && heaviest.value < delta;
    leftover_ok = leftover_ok && L.leftover_contribution <= k0 * L.leftover_on_u && L.leftover_on_u <= 2 * delta;
    for (const auto& J : L.bad_family) bad_sets = bad_sets && is_bad(J, L, rho, delta, s);
    const Rational card_bound = (1 / s.ledger.epsilon(L.n + 1)) * (1 + Rational(floor_of(1 / delta)));
    cardinality = cardinality && Rational(static_cast<long>(L.bad_family.size())) < card_bound;
    bad_mass = bad_mass &&
               compare_with_phi_power(L.bad_mass / (1 + 1 / delta), static_cast<unsigned long>(L.n + 1), s.ledger) <= 0;
    const Rational B = level_bound_B(s.ledger, L.n);
    bad_ok = bad_ok && L.bad_contribution <= k0 * eps * L.bad_mass && k0 * eps * L.bad_mass <= B;
    low_ok = low_ok && L.low_contribution <= L.n * eps;
    const Rational level_total = L.low_contribution + L.leftover_contribution + L.bad_contribution;
    const Rational level_bound = L.n * eps + 2 * k0 * delta + B;
    level_ok = level_ok && level_total <= level_bound;
    level_sum += level_total;
    bound_sum += level_bound;
  }
  v.record("levels", std::to_string(d.levels.size()));
  v.record("total", d.total);
  v.record("C", s.C());
  v.require(rounding, "level_rounding");
  v.require(leftover_zb, "leftover_zbounded");
  v.require(leftover_ok, "leftover<=2k0delta");
  v.require(bad_sets, "bad_sets_valid");
  v.require(cardinality, "bad_cardinality");
  v.require(bad_mass, "bad_mass");
  v.require(bad_ok, "bad<=B");
  v.require(low_ok, "low<=n_eps");
  v.require(level_ok, "level_bounds");
  v.require(level_sum == d.total, "levels_partition_total");
  v.require(bound_sum <= s.C(), "bounds_within_C");
  v.require(d.total <= s.C(), "total<=C");
  return v;
}

Verdict verify_T3_sandwich(const SparseVector& a, const Setting& s) {
  require_materialized(a, s.blocks);
  const DualNormCertificate dm = dual_norm_M(u_star_combination(a, s.blocks), s.space, s.blocks, dual_options(s));
  const ScalarBound zs = dual_norm(s.space, a, s.precision);
  Verdict v;
  v.record("dual_M_lower", dm.value.lower);
  v.record("dual_M_upper", dm.value.upper);
  v.record("dual_Z_lower", zs.lower);
  v.record("dual_Z_upper", zs.upper);
  v.require(s.A() * zs.upper <= dm.value.lower, "lower");
  v.require(dm.value.upper <= s.C() * zs.lower, "upper");
  return v;
}

Verdict verify_operator_bound(const SparseVector& x, const Setting& s) {
  const ScalarBound qz = norm(s.space, apply_Q(x, s.blocks), s.precision);
  const NormCertificate m = exact_norm_M(x, s.space, s.blocks);
  Verdict v;
  v.record("Qx_Z_upper", qz.upper);
  v.record("x_M", m.value);
  v.require(qz.upper <= s.C() * m.value, "operator_bound");
  return v;
}

}  // namespace isopoly
