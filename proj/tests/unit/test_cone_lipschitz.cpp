#include <gtest/gtest.h>

#include <cmath>

#include "volcone/class_parser.hpp"
#include "volcone/cone_lipschitz.hpp"
#include "volcone/error.hpp"
#include "volcone/volume.hpp"

using namespace volcone;
using namespace volcone::cone;

namespace {

std::vector<RationalVector> standard_basis(std::size_t n) {
  std::vector<RationalVector> b(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) b[i][i] = 1;
  return b;
}

RationalVector vec(std::initializer_list<Rational> xs) { return RationalVector(xs); }

const Box kQuadrant{{Rational(0), Rational(0)}, {Rational(3), Rational(3)}};

}  // namespace

TEST(BasisNorm, Examples) {
  const auto std2 = standard_basis(2);
  EXPECT_EQ(basis_norm(vec({3, -4}), std2), 7);
  const std::vector<RationalVector> skew{vec({1, 1}), vec({1, -1})};
  EXPECT_EQ(basis_norm(vec({2, 0}), skew), 2);
  EXPECT_EQ(basis_norm(vec({0, 0}), skew), 0);
  const std::vector<RationalVector> singular{vec({1, 1}), vec({2, 2})};
  EXPECT_THROW(basis_norm(vec({1, 0}), singular), DomainError);
  EXPECT_THROW(basis_norm(vec({1, 0}), std::vector<RationalVector>{vec({1, 0})}), DomainError);
}

TEST(BasisNorm, IsANorm) {
  const std::vector<RationalVector> basis{vec({2, 1}), vec({Rational(1, 3), 1})};
  Sampler s(3);
  const Box box{{Rational(-5), Rational(-5)}, {Rational(5), Rational(5)}};
  for (int i = 0; i < 200; ++i) {
    const auto u = s.point(box);
    const auto v = s.point(box);
    const Rational lambda = s.uniform(Rational(-3), Rational(3));
    RationalVector sum(2), scaled(2);
    for (int j = 0; j < 2; ++j) {
      sum[j] = u[j] + v[j];
      scaled[j] = lambda * u[j];
    }
    EXPECT_LE(basis_norm(sum, basis), basis_norm(u, basis) + basis_norm(v, basis));
    EXPECT_EQ(basis_norm(scaled, basis), abs(lambda) * basis_norm(u, basis));
  }
}

TEST(ConeFunctions, Construction) {
  EXPECT_THROW(monomial(Rational(-1), Rational(2)), DomainError);
  EXPECT_THROW(monomial(Rational(0), Rational(1, 2)), DomainError);
  EXPECT_THROW(linear_form(vec({1, -1})), DomainError);
  const auto f = monomial(Rational(1), Rational(1));
  EXPECT_EQ(f.degree, 2);
  EXPECT_TRUE(f.member(vec({1, 2})));
  EXPECT_FALSE(f.member(vec({0, 2})));
  EXPECT_TRUE(f.closure_member(vec({0, 2})));
  EXPECT_DOUBLE_EQ(f.evaluate(vec({3, Rational(1, 2)})), 1.5);
}

TEST(ConeFunctions, MembershipIsConvex) {
  const auto g = builtin_geometry("bl2_p2");
  const auto f = volume_function(g);
  Sampler s(5);
  const Box box{RationalVector(3, Rational(-4)), RationalVector(3, Rational(4))};
  int checked = 0;
  while (checked < 200) {
    const auto x = s.point(box);
    const auto y = s.point(box);
    if (!f.member(x) || !f.member(y)) continue;
    const Rational t = s.unit();
    RationalVector mid(3);
    for (int j = 0; j < 3; ++j) mid[j] = t * x[j] + (1 - t) * y[j];
    EXPECT_TRUE(f.member(mid));
    EXPECT_GE(f.evaluate(x), 0.0);
    ++checked;
  }
}

TEST(Axioms, MonomialAndVolumePass) {
  const auto m = verify_axioms(monomial(Rational(1), Rational(1)), kQuadrant, 500, 1);
  EXPECT_TRUE(m.passed());
  EXPECT_TRUE(m.failures.empty());
  const auto g = builtin_geometry("bl1_p2");
  const Box box{{Rational(1, 2), Rational(-4)}, {Rational(4), Rational(4)}};
  const auto v = verify_axioms(volume_function(g), box, 500, 2);
  EXPECT_TRUE(v.passed());
  EXPECT_GT(v.sup_sampled, 0.0);
}

TEST(Axioms, DifferenceFailsMonotonicityWithWitness) {
  const auto r = verify_axioms(difference_form(), kQuadrant, 200, 3);
  EXPECT_TRUE(r.homogeneous);
  EXPECT_FALSE(r.monotone);
  EXPECT_FALSE(r.passed());
  ASSERT_EQ(r.failures.size(), 1U);
  const auto& w = r.failures[0];
  EXPECT_EQ(w.axiom, 'b');
  ASSERT_EQ(w.witness.size(), 2U);
  const auto& x = w.witness[0];
  const auto& y = w.witness[1];
  EXPECT_LT(to_double(x[0] + y[0] - x[1] - y[1]), to_double(x[0] - x[1]));
}

TEST(Certificate, MonomialExample) {
  const auto f = monomial(Rational(1), Rational(1));
  const auto cert = lipschitz_certificate(f, vec({1, 1}), Rational(1, 2), standard_basis(2));
  EXPECT_DOUBLE_EQ(cert.sup_u, 25.0 / 16.0);
  EXPECT_NEAR(cert.constant, 13.125, 1e-12);
  EXPECT_EQ(cert.valid_radius, Rational(1, 8));
  const auto emp = empirical_lipschitz(f, cert, 2000, 4);
  EXPECT_LE(emp.max_quotient, cert.constant);
  EXPECT_GT(emp.max_quotient, 1.0);
  EXPECT_LT(emp.max_quotient, 1.3);
}

TEST(Certificate, ConstantDoublesWhenRadiusHalves) {
  const auto f = monomial(Rational(2), Rational(1));
  const auto basis = standard_basis(2);
  const auto wide = lipschitz_certificate(f, vec({2, 2}), Rational(1, 2), basis, 3.0);
  const auto narrow = lipschitz_certificate(f, vec({2, 2}), Rational(1, 4), basis, 3.0);
  EXPECT_TRUE(narrow.sup_from_hint);
  EXPECT_NEAR(narrow.constant, 2.0 * wide.constant, 1e-12);
}

TEST(Certificate, RadiusTooLargeIsRejected) {
  const auto f = monomial(Rational(1), Rational(1));
  EXPECT_THROW(lipschitz_certificate(f, vec({1, 1}), Rational(3, 2), standard_basis(2)),
               PreconditionError);
  EXPECT_THROW(lipschitz_certificate(f, vec({0, 1}), Rational(1, 4), standard_basis(2)),
               PreconditionError);
  const std::vector<RationalVector> outside{vec({1, 0}), vec({1, -1})};
  EXPECT_THROW(lipschitz_certificate(f, vec({1, 1}), Rational(1, 4), outside), PreconditionError);
}

TEST(Certificate, VolumeOnBlowup) {
  const auto g = builtin_geometry("bl1_p2");
  const auto f = volume_function(g);
  const std::vector<RationalVector> basis{vec({1, 0}), vec({1, -1})};
  const auto cert = lipschitz_certificate(f, vec({2, 0}), Rational(1, 2), basis);
  EXPECT_NEAR(cert.constant, 8.0 * cert.sup_u * 1.05, 1e-12);
  EXPECT_GE(cert.sup_u, 6.25 - 1e-12);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EXPECT_LE(empirical_lipschitz(f, cert, 1000, seed).max_quotient, cert.constant);
  }
}

TEST(Certificate, LinearFormQuotientsStayBelowConstant) {
  const auto f = linear_form(vec({2, 1}));
  const auto cert = lipschitz_certificate(f, vec({1, 1}), Rational(1, 2), standard_basis(2));
  const auto emp = empirical_lipschitz(f, cert, 2000, 9);
  EXPECT_LE(emp.max_quotient, 2.0 + 1e-12);
  EXPECT_LE(emp.max_quotient, cert.constant);
}

TEST(Certificate, VolumeNearAWallOfTwoPointBlowup) {
  const auto g = builtin_geometry("bl2_p2");
  const auto f = volume_function(g);
  const auto cert = lipschitz_certificate(f, vec({3, -1, 0}), Rational(1, 2), standard_basis(3));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EXPECT_LE(empirical_lipschitz(f, cert, 1000, seed).max_quotient, cert.constant);
  }
}

TEST(Empirical, IdenticalPairsAreSkipped) {
  const auto f = monomial(Rational(1), Rational(1));
  auto cert = lipschitz_certificate(f, vec({1, 1}), Rational(1, 2), standard_basis(2));
  cert.valid_radius = 0;
  const auto emp = empirical_lipschitz(f, cert, 50, 1);
  EXPECT_EQ(emp.skipped, 50U);
  EXPECT_EQ(emp.pairs, 0U);
}

TEST(Empirical, ThreadIndependent) {
  const auto f = monomial(Rational(1), Rational(2));
  const auto cert = lipschitz_certificate(f, vec({1, 1}), Rational(1, 2), standard_basis(2));
  const auto a = empirical_lipschitz(f, cert, 500, 7, 1);
  const auto b = empirical_lipschitz(f, cert, 500, 7, 4);
  EXPECT_EQ(a.max_quotient, b.max_quotient);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Chain, HoldsForEveryAxiomaticFunction) {
  const auto g = builtin_geometry("bl1_p2");
  struct Case {
    ConeFunction f;
    RationalVector center;
    std::vector<RationalVector> basis;
    Box box;
  };
  const std::vector<Case> cases{
      {monomial(Rational(1), Rational(1)), vec({1, 1}), standard_basis(2), kQuadrant},
      {linear_form(vec({1, 3})), vec({1, 1}), standard_basis(2), kQuadrant},
      {volume_function(g), vec({2, 0}), {vec({1, 0}), vec({1, -1})},
       Box{{Rational(1, 2), Rational(-4)}, {Rational(4), Rational(4)}}},
  };
  for (const auto& c : cases) {
    const auto cert = lipschitz_certificate(c.f, c.center, Rational(1, 2), c.basis);
    const auto r = chain_check(c.f, cert, c.box, 500, 11);
    EXPECT_TRUE(r.passed()) << c.f.label;
    EXPECT_GT(r.samples, 400U);
    EXPECT_GE(r.worst_margin, -1e-9);
  }
}
