#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "isopoly/errors.hpp"

using namespace isopoly;

namespace {

const std::vector<const Setting*>& settings() {
  static const std::vector<const Setting*> all = {&fixture::c0_depth4(), &fixture::l2_depth4()};
  return all;
}

std::string dump(const Verdict& v) {
  std::string out;
  for (const auto& [k, val] : v.measured) out += k + "=" + val + " ";
  return out;
}

}  // namespace

TEST(Quotient, UStarAveragesOverTheBlock) {
  const BlockSystem& b = fixture::c0_depth4().blocks;
  EXPECT_EQ(u_star(1, b), parse_vector("5:1/4,6:1/4,7:1/4,8:1/4"));
  const SparseVector u3 = u_star(3, b);
  EXPECT_EQ(u3.size(), 16u);
  EXPECT_EQ(u3.l1_norm(), 1);
  EXPECT_EQ(u_star_combination(parse_vector("1:2,2:-1"), b), u_star(1, b).scaled(2) - u_star(2, b));
  EXPECT_THROW(u_star(5, b), InvalidArgument);
}

TEST(Quotient, QAveragesAndIgnoresGaps) {
  const BlockSystem& b = fixture::c0_depth4().blocks;
  EXPECT_EQ(apply_Q(b.segment_indicator(2, 8), b), parse_vector("2:1"));
  EXPECT_EQ(apply_Q(parse_vector("1:5,5:1,6:1,9:7,54:32"), b), parse_vector("1:1/2,4:1"));
}

TEST(Quotient, AdjointIdentity) {
  for (const Setting* s : settings()) {
    for (int n = 1; n <= s->blocks.depth(); ++n) {
      EXPECT_TRUE(verify_adjoint(n, s->blocks));
      EXPECT_EQ(adjoint_functional(n, s->blocks), u_star(n, s->blocks));
      SparseVector wrong = u_star(n, s->blocks);
      wrong.set(s->blocks.block(n).start, Rational(1, 3));
      EXPECT_FALSE(verify_adjoint_candidate(n, wrong, s->blocks));
    }
    EXPECT_THROW(verify_adjoint(s->blocks.depth() + 1, s->blocks), HypothesisFailed);
  }
}

TEST(Quotient, OperatorBound) {
  for (const Setting* s : settings()) {
    Rng rng(101);
    for (int t = 0; t < 40; ++t) {
      const SparseVector x = random_block_vector(rng, s->blocks, s->blocks.depth(), 6, true);
      const Verdict v = verify_operator_bound(x, *s);
      EXPECT_TRUE(v.passed) << dump(v);
    }
  }
}

TEST(Quotient, L1Instances) {
  for (const Setting* s : settings()) {
    Rng rng(103);
    for (int t = 0; t < 60; ++t) {
      const L1Case c = generate_L1(rng, *s, false);
      const Verdict v = verify_L1(c.I, c.profile, *s);
      EXPECT_TRUE(v.passed) << format_profile(c.profile) << " " << dump(v);
    }
    // the whole of one block: the tight case
    for (int n = 1; n <= s->blocks.depth(); ++n) {
      const Verdict v = verify_L1(FiniteSet{n}, {{n, s->blocks.block(n).length}}, *s);
      EXPECT_TRUE(v.passed);
    }
  }
}

TEST(Quotient, L1RejectsProfilesOutsideTheBall) {
  const Setting& s = fixture::l2_depth4();
  EXPECT_THROW(verify_L1(FiniteSet{1, 2}, {{1, 4}, {2, 8}}, s), HypothesisFailed);
  Rng rng(107);
  for (int t = 0; t < 20; ++t) {
    const L1Case c = generate_L1(rng, s, true);
    EXPECT_THROW(verify_L1(c.I, c.profile, s), HypothesisFailed);
  }
  // c0 has no profile outside its ball, so the violating generator refuses
  EXPECT_THROW(generate_L1(rng, fixture::c0_depth4(), true), InvalidArgument);
}

TEST(Quotient, L2WitnessAndLowerBound) {
  for (const Setting* s : settings()) {
    Rng rng(109);
    for (int t = 0; t < 4; ++t) {
      const SparseVector a = generate_coefficients(rng, *s, false);
      const L2Witness w = l2_witness(a, *s);
      EXPECT_NE(ball_member(s->space, profile_vector(w.profile, s->blocks)), BallPosition::Outside);
      const Verdict v = verify_L2_lowerbound(a, *s);
      EXPECT_TRUE(v.passed) << format_vector(a) << " " << dump(v);
    }
    EXPECT_THROW(verify_L2_lowerbound(parse_vector("9:1"), *s), HypothesisFailed);
  }
}

TEST(Quotient, T3Sandwich) {
  for (const Setting* s : settings()) {
    Rng rng(113);
    for (int t = 0; t < 4; ++t) {
      const SparseVector a = generate_coefficients(rng, *s, false);
      const Verdict v = verify_T3_sandwich(a, *s);
      EXPECT_TRUE(v.passed) << format_vector(a) << " " << dump(v);
    }
    Rng bad(114);
    EXPECT_THROW(verify_T3_sandwich(generate_coefficients(bad, *s, true), *s), HypothesisFailed);
  }
}

TEST(Quotient, L3ChunksSplitTheMeasure) {
  const AtomicMeasure mu = parse_measure("1:(5,3/4); 2:(10,1/4); 3:(23,1/4); 4:(54,1/3)");
  const L3Chunks c = l3_chunks(mu);
  EXPECT_EQ(c.heavy, parse_measure("1:(5,3/4)"));
  AtomicMeasure rebuilt = c.heavy;
  for (const auto& chunk : c.light) {
    EXPECT_LE(chunk.total_mass(), 1);
    for (const auto& [n, atom] : chunk.atoms()) rebuilt.set(n, atom.coordinate, atom.weight);
  }
  EXPECT_EQ(rebuilt, mu);
}

TEST(Quotient, L3Instances) {
  for (const Setting* s : settings()) {
    Rng rng(127);
    for (int t = 0; t < 15; ++t) {
      const L3Case c = generate_L3(rng, *s, false);
      const Verdict v = verify_L3(c.mu, c.u, c.n, *s);
      EXPECT_TRUE(v.passed) << format_measure(c.mu) << " " << dump(v);
    }
  }
}

TEST(Quotient, L4Instances) {
  for (const Setting* s : settings()) {
    Rng rng(131);
    for (int t = 0; t < 40; ++t) {
      const L4Instance in = generate_L4(rng, *s, false);
      const Verdict v = verify_L4(in, *s);
      EXPECT_TRUE(v.passed) << dump(v);
    }
  }
}

TEST(Quotient, L5DecompositionAddsUp) {
  for (const Setting* s : settings()) {
    Rng rng(137);
    for (int t = 0; t < 30; ++t) {
      const L5Case c = generate_L5(rng, *s, false);
      const LevelDecomposition d = l5_decompose(c.u, c.rho, *s);
      Rational direct = 0;
      for (const auto& [i, r] : c.rho) direct += r * u_star(static_cast<int>(i), s->blocks).dot(c.u);
      EXPECT_EQ(d.total, direct);
      const Verdict v = verify_L5(c.u, c.rho, *s);
      EXPECT_TRUE(v.passed) << dump(v);
    }
  }
}

TEST(Quotient, NegativeControlsRaiseHypothesisFailed) {
  const Setting& s = fixture::l2_depth4();
  Rng rng(139);
  for (int t = 0; t < 20; ++t) {
    const L3Case c3 = generate_L3(rng, s, true);
    EXPECT_THROW(verify_L3(c3.mu, c3.u, c3.n, s), HypothesisFailed);
    const L4Instance c4 = generate_L4(rng, s, true);
    EXPECT_THROW(verify_L4(c4, s), HypothesisFailed);
    const L5Case c5 = generate_L5(rng, s, true);
    EXPECT_THROW(verify_L5(c5.u, c5.rho, s), HypothesisFailed);
    EXPECT_THROW(verify_L2_lowerbound(generate_coefficients(rng, s, true), s), HypothesisFailed);
  }
}
