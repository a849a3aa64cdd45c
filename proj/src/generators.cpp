#include "isopoly/generators.hpp"

#include <algorithm>

#include "isopoly/errors.hpp"

namespace isopoly {

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

Rational random_rational(Rng& rng, const Rational& lo, const Rational& hi, Index max_den) {
  const Index q = uniform(rng, 1, max_den);
  const Index p_lo = ceil_of(lo * q).get_si();
  const Index p_hi = floor_of(hi * q).get_si();
  if (p_hi < p_lo) return lo;
  return ratio(uniform(rng, p_lo, p_hi), q);
}

std::vector<Index> random_subset(Rng& rng, const std::vector<Index>& pool, std::size_t max_size) {
  if (pool.empty()) return {};
  std::vector<Index> shuffled = pool;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(i) - 1))]);
  }
  const auto k = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(std::min(max_size, pool.size()))));
  shuffled.resize(k);
  std::sort(shuffled.begin(), shuffled.end());
  return shuffled;
}

namespace {

std::vector<Index> block_range(int first, int last) {
  std::vector<Index> out;
  for (int n = first; n <= last; ++n) out.push_back(n);
  return out;
}

Rational nonzero_rational(Rng& rng, const Rational& lo, const Rational& hi, Index max_den) {
  for (;;) {
    Rational r = random_rational(rng, lo, hi, max_den);
    if (sgn(r) != 0) return r;
  }
}

}  // namespace

SparseVector random_block_vector(Rng& rng, const BlockSystem& blocks, int max_block, std::size_t max_support,
                                 bool allow_negative, Index max_den) {
  max_block = std::min(max_block, blocks.depth());
  std::vector<Index> pool;
  for (int n = 1; n <= max_block; ++n) {
    for (Index j = blocks.block(n).start; j <= blocks.block(n).end(); ++j) pool.push_back(j);
  }
  SparseVector x;
  const Rational lo = allow_negative ? Rational(-1) : Rational(0);
  for (Index j : random_subset(rng, pool, max_support)) x.set(j, nonzero_rational(rng, lo, 1, max_den));
  return x;
}

AtomicMeasure random_measure(Rng& rng, const BlockSystem& blocks, std::size_t max_blocks, Index max_den) {
  AtomicMeasure mu;
  for (Index n : random_subset(rng, block_range(1, blocks.depth()), max_blocks)) {
    const Block& b = blocks.block(static_cast<int>(n));
    mu.set(static_cast<int>(n), uniform(rng, b.start, b.end()), nonzero_rational(rng, 0, 1, max_den));
  }
  return mu;
}

SparseVector random_coefficients(Rng& rng, const BlockSystem& blocks, bool nonnegative, Index max_den) {
  SparseVector a;
  const Rational lo = nonnegative ? Rational(0) : Rational(-1);
  for (Index n : random_subset(rng, block_range(1, blocks.depth()), static_cast<std::size_t>(blocks.depth()))) {
    a.set(n, nonzero_rational(rng, lo, 1, max_den));
  }
  return a;
}

SparseVector random_dual_ball_point(Rng& rng, const Setting& s) {
  const SparseVector raw = random_coefficients(rng, s.blocks, true);
  const ScalarBound d = dual_norm(s.space, raw, Rational(1, 1000000));
  SparseVector rho = raw.scaled(1 / d.upper);
  if (dual_ball_member(s.space, rho) == BallPosition::Outside) throw Error("scaled rho left the dual ball");
  return rho;
}

L1Case generate_L1(Rng& rng, const Setting& s, bool violate) {
  L1Case c;
  const auto all = block_range(1, s.blocks.depth());
  if (violate) {
    // Full segments on every block: ||sum z_n|| = phi-type growth pushes past 1 unless Z is c0-like.
    c.I = FiniteSet(random_subset(rng, all, all.size()));
    if (c.I.size() < 2) c.I = FiniteSet(std::vector<Index>{all.front(), all.back()});
    for (Index n : c.I.elements()) c.profile[static_cast<int>(n)] = s.blocks.block(static_cast<int>(n)).length;
    if (ball_member(s.space, profile_vector(c.profile, s.blocks)) != BallPosition::Outside) {
      throw InvalidArgument("every segment profile of " + format_space(s.space) + " lies in the unit ball");
    }
    return c;
  }
  c.I = FiniteSet(random_subset(rng, all, all.size()));
  for (Index n : c.I.elements()) {
    const Index g = uniform(rng, 0, s.blocks.block(static_cast<int>(n)).length);
    if (g > 0) c.profile[static_cast<int>(n)] = g;
  }
  while (ball_member(s.space, profile_vector(c.profile, s.blocks)) == BallPosition::Outside) {
    auto it = std::next(c.profile.begin(), uniform(rng, 0, static_cast<std::int64_t>(c.profile.size()) - 1));
    it->second /= 2;
    if (it->second == 0) c.profile.erase(it);
  }
  return c;
}

namespace {

// Shrinks the largest weight until the measure is Z-bounded.
void make_zbounded(AtomicMeasure& mu, const Setting& s) {
  while (!is_zbounded(mu, s.space, s.blocks)) {
    auto heaviest = std::max_element(mu.atoms().begin(), mu.atoms().end(),
                                     [](const auto& a, const auto& b) { return a.second.weight < b.second.weight; });
    mu.set(heaviest->first, heaviest->second.coordinate, heaviest->second.weight / 2);
  }
}

}  // namespace

L3Case generate_L3(Rng& rng, const Setting& s, bool violate) {
  const int depth = s.blocks.depth();
  for (int attempt = 0;; ++attempt) {
    L3Case c;
    c.n = static_cast<int>(uniform(rng, 0, depth - 1));
    const auto touched = random_subset(rng, block_range(c.n + 1, depth), static_cast<std::size_t>(depth));
    for (Index i : touched) {
      const Block& b = s.blocks.block(static_cast<int>(i));
      c.mu.set(static_cast<int>(i), uniform(rng, b.start, b.end()), nonzero_rational(rng, 0, 1, 8));
    }
    make_zbounded(c.mu, s);
    const Rational eps = s.ledger.epsilon(c.n + 1);
    for (const auto& [i, atom] : c.mu.atoms()) {
      c.u.set(atom.coordinate, eps * random_rational(rng, 1, 2, 4));
    }
    // A few unrelated coordinates below eps.
    const auto extra = random_block_vector(rng, s.blocks, depth, 3, false);
    for (const auto& [j, v] : extra) {
      if (c.u.get(j) == 0) c.u.set(j, v * eps / 2);
    }
    if (exact_norm_M(c.u, s.space, s.blocks).value > 1) {
      if (attempt > 50) throw Error("could not generate an L3 instance with ||u|| <= 1");
      continue;
    }
    if (violate) {
      switch (uniform(rng, 0, 2)) {
        case 0: {  // an atom value below eps_{n+1}
          const Index j = c.mu.atoms().begin()->second.coordinate;
          c.u.set(j, eps / 2);
          break;
        }
        case 1:  // n not below the first touched block
          c.n = c.mu.atoms().begin()->first;
          break;
        default:  // ||u|| > 1
          c.u = c.u.scaled(2 / c.u.sup_norm());
          break;
      }
    }
    return c;
  }
}

L4Instance generate_L4(Rng& rng, const Setting& s, bool violate) {
  const int depth = s.blocks.depth();
  for (int attempt = 0;; ++attempt) {
    L4Instance in;
    in.n = static_cast<int>(uniform(rng, 0, depth - 1));
    in.I = FiniteSet(random_subset(rng, block_range(in.n + 1, depth), static_cast<std::size_t>(depth)));
    const Rational eps = s.ledger.epsilon(in.n + 1);
    for (Index i : in.I.elements()) {
      const Block& b = s.blocks.block(static_cast<int>(i));
      // Bias towards long segments so bad sets occur.
      const Index g = uniform(rng, 0, 1) ? b.length : uniform(rng, 1, b.length);
      in.segments[static_cast<int>(i)] = g;
      in.u.set(b.start + g - 1, eps);
    }
    if (exact_norm_M(in.u, s.space, s.blocks).value > 1) {
      if (attempt > 50) throw Error("could not generate an L4 instance with ||u|| <= 1");
      continue;
    }
    in.rho = random_dual_ball_point(rng, s);
    // Keep rho on I only; restriction stays in the dual ball.
    in.rho = in.rho.restricted([&](Index i) { return in.I.contains(i); });
    if (in.rho.empty()) in.rho.set(in.I.min(), 1);

    // Random disjoint family: walk I in random order, cut into runs, keep the bad ones.
    const Rational delta = s.ledger.delta_at(in.n);
    std::vector<Index> order = random_subset(rng, in.I.elements(), in.I.size());
    std::vector<int> run;
    auto flush = [&]() {
      if (run.empty()) return;
      SparseVector z;
      Rational weight = 0;
      for (int i : run) {
        const Rational r = ratio(in.segments.at(i), s.blocks.block(i).length);
        z.add(i, r);
        weight += in.rho.get(i) * r;
      }
      if (weight >= delta && ball_member(s.space, z) != BallPosition::Outside) in.family.push_back(run);
      run.clear();
    };
    for (Index i : order) {
      run.push_back(static_cast<int>(i));
      if (uniform(rng, 0, 1)) flush();
    }
    flush();

    if (violate) {
      switch (uniform(rng, 0, 2)) {
        case 0: {  // ||rho||_{Z*} > 1
          const ScalarBound d = dual_norm(s.space, in.rho, Rational(1, 1000000));
          in.rho = in.rho.scaled(2 / d.lower);
          break;
        }
        case 1: {  // a family member violating condition (2)
          in.family.clear();
          const int i = static_cast<int>(in.I.min());
          in.rho.set(i, Rational(1, 1000) * delta);
          in.family.push_back({i});
          break;
        }
        default: {  // coordinate bound fails
          const int i = static_cast<int>(in.I.max());
          in.u.set(s.blocks.block(i).start + in.segments.at(i) - 1, eps / 2);
          break;
        }
      }
    }
    return in;
  }
}

L5Case generate_L5(Rng& rng, const Setting& s, bool violate) {
  L5Case c;
  const SparseVector raw = random_block_vector(rng, s.blocks, s.blocks.depth(), 8, false);
  const Rational norm_u = exact_norm_M(raw, s.space, s.blocks).value;
  c.u = raw.scaled(1 / norm_u);
  c.rho = random_dual_ball_point(rng, s);
  if (violate) {
    if (uniform(rng, 0, 1)) {
      const ScalarBound d = dual_norm(s.space, c.rho, Rational(1, 1000000));
      c.rho = c.rho.scaled(2 / d.lower);
    } else {
      c.u = c.u.scaled(2);
    }
  }
  return c;
}

SparseVector generate_coefficients(Rng& rng, const Setting& s, bool violate) {
  SparseVector a = random_coefficients(rng, s.blocks, false);
  if (violate) a.set(s.blocks.depth() + uniform(rng, 1, 3), nonzero_rational(rng, -1, 1, 6));
  return a;
}

}  // namespace isopoly
