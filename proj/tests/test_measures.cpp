#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "isopoly/errors.hpp"
#include "oracles.hpp"

using namespace isopoly;

namespace {

// Membership in M from the definition: Z-bounded, and the atoms split into at most
// min F groups of mass <= 1.
bool in_M_oracle(const AtomicMeasure& mu, const Setting& s) {
  if (mu.empty()) return true;
  if (oracle::zbound(mu, s.space, s.blocks) > 1) return false;
  std::vector<Rational> w;
  for (const auto& [n, atom] : mu.atoms()) w.push_back(atom.weight);
  const Index K = s.blocks.block(mu.atoms().begin()->first).start;
  for (const auto& label : oracle::set_partitions(static_cast<int>(w.size()))) {
    const int groups = *std::max_element(label.begin(), label.end()) + 1;
    if (groups > K) continue;
    std::vector<Rational> load(groups, 0);
    for (std::size_t i = 0; i < w.size(); ++i) load[label[i]] += w[i];
    if (std::all_of(load.begin(), load.end(), [](const Rational& l) { return l <= 1; })) return true;
  }
  return false;
}

}  // namespace

TEST(Measures, SetRejectsBadWeightsAndDropsZeros) {
  AtomicMeasure mu;
  mu.set(2, 11, Rational(1, 2));
  EXPECT_EQ(mu.size(), 1u);
  mu.set(2, 11, 0);
  EXPECT_TRUE(mu.empty());
  EXPECT_THROW(mu.set(1, 5, Rational(3, 2)), InvalidArgument);
  EXPECT_THROW(mu.set(1, 5, Rational(-1, 2)), InvalidArgument);
}

TEST(Measures, FormatRoundTrip) {
  const AtomicMeasure mu = parse_measure("1:(6,1/2); 3:(25,1/3)");
  EXPECT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.total_mass(), Rational(5, 6));
  EXPECT_EQ(parse_measure(format_measure(mu)), mu);
  EXPECT_EQ(mu.functional(), parse_vector("6:1/2,25:1/3"));
  EXPECT_THROW(parse_measure("1:6,1/2"), ParseError);
}

TEST(Measures, StructuralChecks) {
  const BlockSystem& b = fixture::c0_depth4().blocks;
  EXPECT_EQ(structural_violation(parse_measure("1:(6,1/2)"), b), "");
  EXPECT_NE(structural_violation(parse_measure("1:(12,1/2)"), b), "");
  EXPECT_FALSE(measure_from_functional(parse_vector("6:1/2,7:1/2"), b).has_value());
  EXPECT_FALSE(measure_from_functional(parse_vector("9:1/2"), b).has_value());
  EXPECT_TRUE(measure_from_functional(parse_vector("6:1/2,12:1/2"), b).has_value());
}

TEST(Measures, ProfileVectorAndMass) {
  const Setting& s = fixture::l2_depth4();
  const SegmentProfile g = {{1, 2}, {3, 16}};
  EXPECT_EQ(profile_vector(g, s.blocks), parse_vector("1:1/2,3:1"));
  const AtomicMeasure mu = parse_measure("1:(6,1/4); 2:(9,1/4); 3:(34,1/4)");
  // G_1 = {5,6} catches 6; G_3 = {19..34} catches 34; block 2 has no segment.
  EXPECT_EQ(profile_mass(mu, g, s.blocks), Rational(1, 2));
  EXPECT_THROW(profile_vector({{1, 5}}, s.blocks), InvalidArgument);
}

TEST(Measures, ZBoundMatchesSubsetOracle) {
  for (const Setting* s : {&fixture::c0_depth4(), &fixture::l2_depth4()}) {
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
      const AtomicMeasure mu = random_measure(rng, s->blocks, 4);
      const ZBoundResult z = zbounded_optimum(mu, s->space, s->blocks);
      ASSERT_TRUE(z.value.is_exact());
      EXPECT_EQ(z.value.lower, oracle::zbound(mu, s->space, s->blocks)) << format_measure(mu);
      EXPECT_NE(ball_member(s->space, profile_vector(z.witness, s->blocks)), BallPosition::Outside);
      EXPECT_EQ(profile_mass(mu, z.witness, s->blocks), z.value.lower);
    }
  }
}

TEST(Measures, NoProfileBeatsTheZBound) {
  const Setting& s = fixture::l2_depth4();
  Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const AtomicMeasure mu = random_measure(rng, s.blocks, 4);
    const Rational best = zbounded_optimum(mu, s.space, s.blocks).value.upper;
    for (int k = 0; k < 30; ++k) {
      SegmentProfile g;
      for (int n = 1; n <= s.blocks.depth(); ++n) g[n] = uniform(rng, 0, s.blocks.block(n).length);
      if (ball_member(s.space, profile_vector(g, s.blocks)) == BallPosition::Outside) continue;
      EXPECT_LE(profile_mass(mu, g, s.blocks), best);
    }
  }
}

TEST(Measures, BestFeasibleSubsetMatchesEnumeration) {
  Rng rng(47);
  const auto l2 = BaseSpaceId::lp(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<ZItem> items;
    const int m = static_cast<int>(uniform(rng, 1, 7));
    for (int i = 0; i < m; ++i) {
      items.push_back({i + 1, random_rational(rng, Rational(1, 8), 1, 8), random_rational(rng, 0, 1, 6)});
    }
    Rational best = 0;
    for (int S = 0; S < (1 << m); ++S) {
      std::vector<Rational> r;
      Rational w = 0;
      for (int i = 0; i < m; ++i) {
        if (S >> i & 1) {
          r.push_back(items[i].ratio);
          w += items[i].weight;
        }
      }
      if (oracle::in_unit_ball(l2, r)) best = std::max(best, w);
    }
    const ZSubset got = best_feasible_subset(items, l2);
    EXPECT_EQ(got.value, best);
    Rational w = 0;
    std::vector<Rational> r;
    for (int i : got.chosen) {
      w += items[i].weight;
      r.push_back(items[i].ratio);
    }
    EXPECT_EQ(w, got.value);
    EXPECT_TRUE(oracle::in_unit_ball(l2, r));
  }
}

TEST(Measures, MembershipMatchesDefinition) {
  for (const Setting* s : {&fixture::c0_depth4(), &fixture::l2_depth4()}) {
    Rng rng(53);
    int members = 0;
    for (int t = 0; t < 300; ++t) {
      AtomicMeasure mu = random_measure(rng, s->blocks, 4, 3);
      const auto d = in_M(mu, s->space, s->blocks);
      EXPECT_EQ(d.has_value(), in_M_oracle(mu, *s)) << format_measure(mu);
      if (!d) continue;
      ++members;
      EXPECT_EQ(d->combined(), mu);
      EXPECT_TRUE(is_admissible(d->parts, s->blocks));
      for (const auto& part : d->parts) EXPECT_TRUE(in_P1(part));
    }
    EXPECT_GT(members, 30);
  }
}

TEST(Measures, MIsHereditaryAndMonotone) {
  const Setting& s = fixture::l2_depth4();
  Rng rng(59);
  for (int t = 0; t < 200; ++t) {
    const AtomicMeasure mu = random_measure(rng, s.blocks, 4, 4);
    if (!in_M(mu, s.space, s.blocks)) continue;
    std::vector<Index> coords;
    for (const auto& [n, atom] : mu.atoms()) coords.push_back(atom.coordinate);
    const FiniteSet keep(random_subset(rng, coords, coords.size()));
    EXPECT_TRUE(in_M(restrict(mu, keep), s.space, s.blocks).has_value());
    AtomicMeasure lower = mu;
    for (const auto& [n, atom] : mu.atoms()) lower.set(n, atom.coordinate, atom.weight * random_rational(rng, 0, 1, 4));
    EXPECT_TRUE(in_M(lower, s.space, s.blocks).has_value());
    // a deeper atom is caught by fewer segments, so moving it to the end of its block stays in M
    AtomicMeasure deep = mu;
    const auto& [n0, a0] = *mu.atoms().begin();
    deep.set(n0, s.blocks.block(n0).end(), a0.weight);
    EXPECT_TRUE(in_M(deep, s.space, s.blocks).has_value());
  }
}

TEST(Measures, AdmissibilityRules) {
  const BlockSystem& b = fixture::c0_depth4().blocks;
  const AtomicMeasure p = parse_measure("1:(6,1/2)"), q = parse_measure("2:(12,1/2)");
  EXPECT_TRUE(is_admissible({p, q}, b));
  EXPECT_FALSE(is_admissible({p, p}, b));
  EXPECT_FALSE(is_admissible({p, AtomicMeasure{}}, b));
  std::vector<AtomicMeasure> many;
  for (int i = 0; i < 6; ++i) {
    AtomicMeasure m;
    m.set(4, 54 + i, Rational(1, 8));
    many.push_back(m);
  }
  EXPECT_FALSE(is_admissible(many, b));  // one block per part: six parts all claim F_4
}

TEST(Measures, P1DecompositionLabelsFormASchreierSet) {
  const Setting& s = fixture::c0_depth4();
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const AtomicMeasure mu = random_measure(rng, s.blocks, 4, 3);
    const auto d = in_M(mu, s.space, s.blocks);
    if (!d) continue;
    const P1Decomposition p = p1_decompose(MMember::measure(*d));
    EXPECT_EQ(p1_violation(p), "");
    SparseVector sum;
    for (const auto& piece : p.pieces) sum = sum + piece.functional;
    EXPECT_EQ(sum, mu.functional());
  }
  EXPECT_EQ(p1_decompose(MMember::unit(3)).labels, FiniteSet{3});
  P1Decomposition bad{FiniteSet{2, 3, 4}, {{2, SparseVector::unit(2)}, {3, SparseVector::unit(3)}, {4, SparseVector::unit(4)}}};
  EXPECT_NE(p1_violation(bad), "");
}

TEST(Measures, FunctionalMembership) {
  const Setting& s = fixture::c0_depth4();
  EXPECT_EQ(in_M(SparseVector{}, s.space, s.blocks)->kind, MMember::Kind::Zero);
  EXPECT_EQ(in_M(parse_vector("3:1"), s.space, s.blocks)->kind, MMember::Kind::Coordinate);
  EXPECT_FALSE(in_M(parse_vector("3:1/2,4:1/2"), s.space, s.blocks).has_value());
  EXPECT_TRUE(in_M(parse_vector("5:1/2,10:1/2"), s.space, s.blocks).has_value());
  EXPECT_FALSE(in_M(parse_vector("5:3/4,10:1/2"), s.space, s.blocks).has_value());
}
