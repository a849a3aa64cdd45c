#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "isopoly/errors.hpp"
#include "oracles.hpp"

using namespace isopoly;

namespace {

std::vector<std::pair<Index, Index>> spans(const BlockSystem& b) {
  std::vector<std::pair<Index, Index>> out;
  for (const Block& f : b.blocks()) out.emplace_back(f.start, f.end());
  return out;
}

// The two block conditions checked straight from their statement.
void expect_block_conditions(const ParameterLedger& L, const BlockSystem& B) {
  Rational mass = 0;
  for (int n = 1; n <= B.depth(); ++n) {
    const Block& f = B.block(n);
    EXPECT_EQ(f.length, B.sizing_factor() * (Index{1} << (n + 1)));
    if (n > 1) {
      EXPECT_GT(f.start, B.block(n - 1).end());
    }
    Rational eps = 1, delta = 1;
    for (int i = 0; i < n; ++i) eps /= L.k0;
    for (int i = 0; i < n - 1; ++i) delta *= L.lambda;
    EXPECT_GT(eps * f.start, 1 + 1 / delta) << "n = " << n;
    mass += Rational(1, f.length);
  }
  EXPECT_LE(mass + B.tail_mass(), Rational(1, 2));
}

}  // namespace

TEST(Ledger, C0Depth4) {
  const Setting& s = fixture::c0_depth4();
  EXPECT_EQ(s.ledger.k0, 2);
  EXPECT_EQ(s.ledger.lambda, Rational(3, 4));
  const std::vector<std::pair<Index, Index>> expected = {{5, 8}, {10, 17}, {23, 38}, {54, 85}};
  EXPECT_EQ(spans(s.blocks), expected);
  EXPECT_EQ(s.A(), Rational(1, 4));
  EXPECT_EQ(s.C(), 28);
  expect_block_conditions(s.ledger, s.blocks);
}

TEST(Ledger, L2Depth4) {
  const Setting& s = fixture::l2_depth4();
  EXPECT_EQ(s.ledger.k0, 2);
  EXPECT_EQ(s.ledger.lambda, Rational(6, 7));
  const std::vector<std::pair<Index, Index>> expected = {{5, 8}, {9, 16}, {19, 34}, {42, 73}};
  EXPECT_EQ(spans(s.blocks), expected);
  EXPECT_LE(s.ledger.phi_k0.bound.lower * s.ledger.phi_k0.bound.lower, 2);
  EXPECT_GE(s.ledger.phi_k0.bound.upper * s.ledger.phi_k0.bound.upper, 2);
  expect_block_conditions(s.ledger, s.blocks);
}

TEST(Ledger, EpsilonAndDeltaSequences) {
  const Setting& s = fixture::c0_depth4();
  for (int n = 0; n <= 10; ++n) {
    EXPECT_EQ(s.ledger.epsilon(n), rational_pow(Rational(1, 2), n));
    EXPECT_EQ(s.ledger.delta_at(n), rational_pow(Rational(3, 4), n));
  }
  ASSERT_EQ(s.ledger.eps.size(), 5u);
  EXPECT_EQ(s.ledger.eps[4], Rational(1, 16));
}

TEST(Ledger, C0ConstantIsTheLimitOfPartialSums) {
  const Setting& s = fixture::c0_depth4();
  Rational prev = 0;
  for (int N = 0; N <= 200; N += 10) {
    const Rational part = oracle::constant_partial_sum(N, s.ledger.lambda, s.ledger.k0, 1);
    EXPECT_GT(part, prev);
    EXPECT_LT(part, s.C());
    prev = part;
  }
  EXPECT_LT(s.C() - prev, Rational(1, 1000000000));
}

TEST(Ledger, L2ConstantBoundsPartialSums) {
  const Setting& s = fixture::l2_depth4();
  const Rational part = oracle::constant_partial_sum(400, s.ledger.lambda, s.ledger.k0, s.ledger.phi_k0.bound.lower);
  EXPECT_LT(part, s.C());
  EXPECT_LT(s.C() - part, Rational(1, 1000));
}

TEST(Ledger, LevelBoundB) {
  const Setting& s = fixture::c0_depth4();
  for (int n = 0; n < 8; ++n) {
    EXPECT_EQ(level_bound_B(s.ledger, n), 2 * (rational_pow(Rational(1, 2), n) + rational_pow(Rational(2, 3), n)));
  }
}

TEST(Ledger, BlockSystemQueries) {
  const BlockSystem& b = fixture::c0_depth4().blocks;
  EXPECT_EQ(b.block_of(4), std::nullopt);
  EXPECT_EQ(b.block_of(10), 2);
  EXPECT_EQ(b.block_of(85), 4);
  EXPECT_EQ(b.block_of(86), std::nullopt);
  EXPECT_EQ(b.position(12), 3);
  EXPECT_THROW(b.position(9), InvalidArgument);
  EXPECT_EQ(b.materialized_mass(), Rational(15, 32));
  EXPECT_EQ(b.tail_mass(), Rational(1, 32));
  EXPECT_EQ(b.segment_indicator(2, 3), parse_vector("10:1,11:1,12:1"));
  EXPECT_THROW(b.segment_indicator(2, 9), InvalidArgument);
}

TEST(Ledger, DeepLedgersStayValid) {
  for (const char* id : {"c0", "lp:2", "lp:3/2"}) {
    const Setting s = fixture::setting(id, 12);
    EXPECT_EQ(s.blocks.depth(), 12);
    EXPECT_EQ(block_violation(s.ledger, s.blocks), "");
    expect_block_conditions(s.ledger, s.blocks);
  }
}

TEST(Ledger, ExplicitSizingAndLambda) {
  const auto space = BaseSpaceId::c0();
  const auto sel = select_k0(space, 8);
  const ParameterLedger L = build_ledger(space, sel.k0, sel.phi, {Rational(2, 3)}, 3);
  EXPECT_EQ(L.lambda, Rational(2, 3));
  SizingRule rule;
  rule.factor = 3;
  const BlockSystem B = build_blocks(L, rule);
  EXPECT_EQ(B.block(1).length, 12);
  expect_block_conditions(L, B);
}

TEST(Ledger, RejectsBadParameters) {
  const auto space = BaseSpaceId::c0();
  const auto sel = select_k0(space, 8);
  EXPECT_THROW(build_ledger(space, sel.k0, sel.phi, {Rational(1, 2)}, 4), InvalidArgument);
  EXPECT_THROW(build_ledger(space, sel.k0, sel.phi, {Rational(1)}, 4), InvalidArgument);
  EXPECT_THROW(build_ledger(space, sel.k0, sel.phi, {}, 0), InvalidArgument);
  EXPECT_THROW(build_ledger(space, 1, sel.phi, {}, 4), InvalidArgument);
  EXPECT_THROW(parse_space("lp:1"), InvalidArgument);
  SizingRule cap;
  cap.coordinate_cap = 40;
  EXPECT_THROW(build_blocks(fixture::c0_depth4().ledger, cap), OverflowBudget);
}

TEST(Ledger, TsirelsonHasNoSmallWitness) {
  EXPECT_THROW(select_k0(BaseSpaceId::tsirelson(), 6), NoUpperEstimateWitness);
}

TEST(Ledger, OtherSpacesFindK0) {
  EXPECT_EQ(select_k0(BaseSpaceId::lp(Rational(3, 2)), 8).k0, 2);
  EXPECT_EQ(select_k0(parse_space("c0sum-lp:2:blocks=2"), 8).k0, 2);
}

TEST(Ledger, BlockViolationCatchesTampering) {
  const Setting& s = fixture::c0_depth4();
  std::vector<Block> blocks = s.blocks.blocks();
  blocks[1].start = 9;
  EXPECT_NE(block_violation(s.ledger, BlockSystem(blocks, 1)), "");
  blocks = s.blocks.blocks();
  blocks[2].length = 15;
  EXPECT_NE(block_violation(s.ledger, BlockSystem(blocks, 1)), "");
}

TEST(Ledger, SerializationRoundTrip) {
  for (const Setting* s : {&fixture::c0_depth4(), &fixture::l2_depth4()}) {
    const std::string text = serialize_parameters(s->ledger, s->blocks);
    const ParameterFile back = parse_parameters(text);
    EXPECT_EQ(back.blocks, s->blocks);
    EXPECT_EQ(back.ledger.lambda, s->ledger.lambda);
    EXPECT_EQ(back.ledger.eps, s->ledger.eps);
    EXPECT_EQ(back.ledger.delta, s->ledger.delta);
    EXPECT_EQ(serialize_parameters(back.ledger, back.blocks), text);
  }
}

TEST(Ledger, TamperedFilesAreRejected) {
  const Setting& s = fixture::c0_depth4();
  const std::string text = serialize_parameters(s.ledger, s.blocks);
  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    const auto at = t.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return t.replace(at, from.size(), to);
  };
  EXPECT_THROW(parse_parameters(replaced("5-8", "4-7")), ParseError);
  EXPECT_THROW(parse_parameters(replaced("lambda = 3/4", "lambda = 4/5")), ParseError);
  EXPECT_THROW(parse_parameters("space = c0\n"), ParseError);
}
