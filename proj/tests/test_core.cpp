#include <gtest/gtest.h>

#include <random>
#include <set>

#include "isopoly/errors.hpp"
#include "isopoly/schreier.hpp"
#include "isopoly/simplex.hpp"
#include "isopoly/sparse_vector.hpp"
#include "oracles.hpp"

using namespace isopoly;

TEST(Rational, ParseAndFormatAreExact) {
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(format_rational(Rational(3)), "3/1");
  EXPECT_EQ(format_rational(ratio(10, -4)), "-5/2");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(Rational, RatioIsCanonical) {
  const Rational q = ratio(5, 5);
  EXPECT_EQ(q, 1);
  EXPECT_EQ(format_rational(q), "1/1");
}

TEST(Rational, FloorCeilAndPowers) {
  EXPECT_EQ(floor_of(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil_of(Rational(-7, 2)), -3);
  EXPECT_EQ(floor_of(Rational(8, 2)), 4);
  EXPECT_EQ(rational_pow(Rational(2, 3), 3), Rational(8, 27));
  EXPECT_EQ(integer_pow(3, 4), 81);
}

TEST(Rational, SimplestBetween) {
  EXPECT_EQ(simplest_rational_between(Rational(1, 3), Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(simplest_rational_between(Rational(5, 8), Rational(7, 8)), Rational(2, 3));
  EXPECT_EQ(simplest_rational_between(Rational(3, 10), Rational(3, 10)), Rational(3, 10));
  // Brute force: nothing with a smaller denominator fits.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Rational lo(static_cast<long>(rng() % 97), 97), hi = lo + Rational(static_cast<long>(rng() % 13 + 1), 211);
    lo.canonicalize();
    hi.canonicalize();
    const Rational q = simplest_rational_between(lo, hi);
    ASSERT_TRUE(lo <= q && q <= hi);
    for (long d = 1; d < q.get_den().get_si(); ++d) {
      const Integer n = ceil_of(lo * d);
      ASSERT_GT(Rational(n, d), hi) << "denominator " << d << " fits in [" << lo << ", " << hi << "]";
    }
  }
}

TEST(Rational, RootEnclosures) {
  const Rational w(1, 1000000000);
  for (int q = 1; q < 40; ++q) {
    for (unsigned long d = 2; d <= 4; ++d) {
      const ScalarBound b = root_enclosure(q, d, w);
      EXPECT_LE(b.width(), w);
      EXPECT_LE(rational_pow(b.lower, d), q);
      EXPECT_GE(rational_pow(b.upper, d), q);
    }
  }
  EXPECT_TRUE(root_enclosure(Rational(9, 4), 2, w).is_exact());
}

TEST(Rational, SurdComparison) {
  EXPECT_EQ(compare(Surd{2, 2}, Surd::of(Rational(3, 2))), -1);
  EXPECT_EQ(compare(Surd{8, 3}, Surd::of(2)), 0);
  EXPECT_EQ(compare(Surd{3, 2}, Surd{2, 3}), 1);  // 3^(1/2) > 2^(1/3)
  EXPECT_EQ(compare(surd_pow(Surd{2, 2}, 4), Surd::of(4)), 0);
}

TEST(SparseVector, StoresNoZerosAndRoundTrips) {
  SparseVector v = parse_vector("1:1/2,4:-3/1,9:2/6");
  EXPECT_EQ(v.size(), 3u);
  v.set(4, 0);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.get(9), Rational(1, 3));
  EXPECT_EQ(format_vector(v), "1:1/2,9:1/3");
  EXPECT_EQ(parse_vector(format_vector(v)), v);
  EXPECT_TRUE(parse_vector("").empty());
  EXPECT_THROW(parse_vector("3:1,2:1"), ParseError);
}

TEST(SparseVector, NormsAndPairing) {
  const SparseVector v = parse_vector("2:-3/4,5:1/2");
  EXPECT_EQ(v.sup_norm(), Rational(3, 4));
  EXPECT_EQ(v.l1_norm(), Rational(5, 4));
  EXPECT_EQ(v.dot(parse_vector("2:4,7:1")), -3);
  EXPECT_EQ((v - v).size(), 0u);
}

TEST(Schreier, EnumerationMatchesBruteForce) {
  for (Index N = 1; N <= 12; ++N) {
    std::set<FiniteSet> expected;
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
      std::vector<Index> e;
      for (Index i = 0; i < N; ++i) {
        if (mask >> i & 1) e.push_back(i + 1);
      }
      if (e.empty() || static_cast<Index>(e.size()) <= e.front()) expected.insert(FiniteSet(e));
    }
    const auto got = enumerate_S1(N);
    EXPECT_EQ(std::set<FiniteSet>(got.begin(), got.end()), expected) << "N = " << N;
    EXPECT_EQ(got.size(), expected.size());
  }
}

TEST(Schreier, MembershipAndOrder) {
  EXPECT_TRUE(is_S1(FiniteSet{}));
  EXPECT_TRUE(is_S1(FiniteSet{3, 7, 100}));
  EXPECT_FALSE(is_S1(FiniteSet{2, 3, 4}));
  EXPECT_TRUE(precedes(FiniteSet{1, 2}, FiniteSet{3}));
  EXPECT_FALSE(precedes(FiniteSet{1, 3}, FiniteSet{3}));
  EXPECT_TRUE(precedes(FiniteSet{}, FiniteSet{1}));
  EXPECT_EQ(parse_set(format_set(FiniteSet{4, 9})), (FiniteSet{4, 9}));
  EXPECT_THROW(FiniteSet(std::vector<Index>{3, 2}), InvalidArgument);
}

TEST(Schreier, HereditarySample) {
  EXPECT_TRUE(is_pointwise_limit_closed_sample(enumerate_S1(8)));
  EXPECT_FALSE(is_pointwise_limit_closed_sample({FiniteSet{4, 5}}));
}

TEST(Simplex, AgreesWithVertexEnumeration) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng() % 3, m = 1 + rng() % 4;
    std::vector<Rational> c(n);
    for (auto& ci : c) ci = ratio(static_cast<long>(rng() % 11) - 3, 1 + static_cast<long>(rng() % 4));
    std::vector<lp::SparseRow> rows;
    std::vector<Rational> rhs;
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (std::size_t i = 0; i < n; ++i) {
      // box keeps the polytope bounded; x >= 0 rows for the oracle
      rows.push_back({{i, Rational(1)}});
      rhs.push_back(ratio(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3)));
      std::vector<Rational> box(n, 0), neg(n, 0);
      box[i] = 1;
      neg[i] = -1;
      A.push_back(box);
      b.push_back(rhs.back());
      A.push_back(neg);
      b.push_back(0);
    }
    for (std::size_t r = 0; r < m; ++r) {
      lp::SparseRow row;
      std::vector<Rational> dense(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const Rational a = ratio(static_cast<long>(rng() % 7) - 2, 1 + static_cast<long>(rng() % 3));
        if (a != 0) row.emplace_back(i, a);
        dense[i] = a;
      }
      const Rational bi = ratio(static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 2));
      rows.push_back(row);
      rhs.push_back(bi);
      A.push_back(dense);
      b.push_back(bi);
    }
    const auto sol = lp::maximize(c, rows, rhs);
    EXPECT_EQ(sol.value, oracle::vertex_maximum(c, A, b)) << "trial " << t;
  }
}

TEST(Simplex, RowsAddedAfterSolveReoptimize) {
  lp::Tableau t({Rational(1), Rational(1)});
  t.add_row({{0, Rational(1)}}, 1);
  t.add_row({{1, Rational(1)}}, 1);
  t.solve();
  EXPECT_EQ(t.value(), 2);
  t.add_row({{0, Rational(1)}, {1, Rational(1)}}, Rational(3, 2));
  t.solve();
  EXPECT_EQ(t.value(), Rational(3, 2));
  t.add_row({{0, Rational(2)}, {1, Rational(1)}}, 1);
  t.solve();
  EXPECT_EQ(t.value(), 1);
}

TEST(Simplex, UnboundedIsRejected) {
  lp::Tableau t({Rational(1), Rational(0)});
  t.add_row({{1, Rational(1)}}, 1);
  EXPECT_THROW(t.solve(), InvalidArgument);
}
