#include <gtest/gtest.h>

#include <set>

#include "volcone/error.hpp"
#include "volcone/linalg.hpp"
#include "volcone/polynomial.hpp"
#include "volcone/rational.hpp"
#include "volcone/sampling.hpp"

using namespace volcone;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rational, FormatsExactAndDecimal) {
  EXPECT_EQ(to_string(Rational(-3, 2)), "-3/2");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_EQ(to_decimal(Rational(1, 3)), "0.333333333333");
  EXPECT_EQ(to_string(RationalVector{Rational(1), Rational(-1, 2)}), "(1, -1/2)");
}

TEST(Rational, ExactSqrtOnlyForSquares) {
  Rational root;
  ASSERT_TRUE(exact_sqrt(Rational(9, 4), root));
  EXPECT_EQ(root, Rational(3, 2));
  EXPECT_FALSE(exact_sqrt(Rational(2), root));
}

TEST(Linalg, SolveAndRank) {
  RationalMatrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = -1;
  auto x = solve(m, {Rational(2), Rational(0)});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], 1);
  EXPECT_EQ((*x)[1], 1);
  EXPECT_EQ(rank(m), 2U);
  RationalMatrix s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  EXPECT_EQ(rank(s), 1U);
  EXPECT_FALSE(solve(s, {Rational(1), Rational(0)}));
}

TEST(Linalg, InertiaCountsSigns) {
  RationalMatrix hyperbolic(2, 2);
  hyperbolic(0, 1) = 1;
  hyperbolic(1, 0) = 1;
  EXPECT_EQ(inertia(hyperbolic), (Inertia{1, 1, 0}));
  RationalMatrix d = RationalMatrix::identity(3);
  d(1, 1) = -1;
  d(2, 2) = 0;
  EXPECT_EQ(inertia(d), (Inertia{1, 1, 1}));
  RationalMatrix neg = RationalMatrix::identity(2);
  neg(0, 0) = -1;
  neg(1, 1) = -1;
  neg(0, 1) = 2;
  neg(1, 0) = 2;
  EXPECT_FALSE(is_negative_definite(neg));
  neg(0, 0) = -2;
  neg(0, 1) = 1;
  neg(1, 0) = 1;
  EXPECT_TRUE(is_negative_definite(neg));
  neg(0, 1) = 0;
  neg(1, 0) = 0;
  EXPECT_TRUE(is_negative_definite(neg));
}

TEST(Polynomial, InterpolatesExactly) {
  std::vector<Rational> xs{Rational(0), Rational(1), Rational(2), Rational(3)};
  std::vector<Rational> ys;
  for (const auto& x : xs) ys.push_back(4 - (x - 1) * (x - 1));
  Polynomial p = Polynomial::interpolate(xs, ys);
  EXPECT_EQ(p, Polynomial({Rational(3), Rational(2), Rational(-1)}));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.derivative_at(Rational(1), 1), 0);
  EXPECT_EQ(p.derivative_at(Rational(5), 3), 0);
  EXPECT_EQ(p.to_string(), "-t^2 + 2t + 3");
  EXPECT_EQ(Polynomial().degree(), -1);
}

TEST(Sampler, DeterministicDyadicInRange) {
  Sampler a(42), b(42);
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) {
    Rational u = a.unit();
    EXPECT_EQ(u, b.unit());
    EXPECT_GE(u, 0);
    EXPECT_LE(u, 1);
    EXPECT_EQ(Rational(u * (1 << Sampler::kBits)).get_den(), 1);
    seen.insert(to_string(u));
  }
  EXPECT_GT(seen.size(), 990U);
}

TEST(Sampler, PointStaysInBox) {
  Box box{{Rational(-1), Rational(2)}, {Rational(1), Rational(3)}};
  Sampler s(3);
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(box.contains(s.point(box)));
  EXPECT_EQ(box.corners().size(), 4U);
  EXPECT_EQ(box.describe(), "[-1, 1] x [2, 3]");
}

TEST(ParallelFor, ResultsIndependentOfThreadCount) {
  std::vector<int> one(500), four(500);
  parallel_for(500, 1, [&](std::size_t i) { one[i] = static_cast<int>(i * i % 97); });
  parallel_for(500, 4, [&](std::size_t i) { four[i] = static_cast<int>(i * i % 97); });
  EXPECT_EQ(one, four);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw DomainError("boom");
               }),
               DomainError);
}
