#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "volcone/class_parser.hpp"
#include "volcone/error.hpp"
#include "volcone/sampling.hpp"
#include "volcone/volume.hpp"

using namespace volcone;

namespace {

Box sample_box(const SurfaceGeometry& g) {
  return {RationalVector(g.rank(), Rational(-4)), RationalVector(g.rank(), Rational(4))};
}

DivisorClass random_big(const SurfaceGeometry& g, Sampler& s) {
  while (true) {
    auto d = g.make_class(s.point(sample_box(g)));
    if (is_big(g, d)) return d;
  }
}

}  // namespace

TEST(Vol, Examples) {
  const auto g = builtin_geometry("bl1_p2");
  EXPECT_EQ(vol(g, parse_class("2H-E", g)), 3);
  EXPECT_EQ(vol(g, parse_class("2H+E", g)), 4);
  EXPECT_EQ(vol(g, parse_class("H-2E", g)), 0);
  EXPECT_EQ(vol(g, parse_class("H-E", g)), 0);
}

TEST(Vol, ClosedFormsOnRankTwoBuiltins) {
  for (const std::string name : {"p2", "bl1_p2", "p1xp1", "hirzebruch_0", "hirzebruch_1",
                                 "hirzebruch_2", "hirzebruch_3", "hirzebruch_5"}) {
    const auto g = builtin_geometry(name);
    Sampler s(17);
    for (int i = 0; i < 300; ++i) {
      const auto c = s.point(sample_box(g));
      EXPECT_EQ(vol(g, g.make_class(c)), oracle::closed_form_volume(name, c)) << name << to_string(c);
    }
  }
}

TEST(Vol, MatchesSubsetOracleOnTwoPointBlowup) {
  const auto g = builtin_geometry("bl2_p2");
  Sampler s(19);
  for (int i = 0; i < 500; ++i) {
    const auto d = g.make_class(s.point(sample_box(g)));
    EXPECT_EQ(vol(g, d), oracle::brute_volume(g, d));
  }
}

TEST(Vol, HomogeneousOfDegreeTwo) {
  for (const auto& name : builtin_names()) {
    const auto g = builtin_geometry(name);
    Sampler s(23);
    for (int i = 0; i < 100; ++i) {
      const auto d = g.make_class(s.point(sample_box(g)));
      const Rational lambda = s.uniform(Rational(1, 8), Rational(5));
      EXPECT_EQ(vol(g, lambda * d), lambda * lambda * vol(g, d));
    }
  }
}

TEST(Vol, MonotoneUnderEffectiveCurveCombinations) {
  const auto g = builtin_geometry("bl2_p2");
  Sampler s(29);
  for (int i = 0; i < 200; ++i) {
    const auto d = g.make_class(s.point(sample_box(g)));
    auto n = g.zero();
    for (const auto& c : g.negative_curves) n += s.uniform(Rational(0), Rational(2)) * c;
    EXPECT_GE(vol(g, d + n), vol(g, d));
  }
}

TEST(Grad, Examples) {
  const auto g = builtin_geometry("bl1_p2");
  const auto h = parse_class("H", g);
  const auto e = parse_class("E", g);
  EXPECT_EQ(grad_vol(g, parse_class("2H-E", g))(h), 4);
  EXPECT_EQ(grad_vol(g, parse_class("2H+E", g))(e), 0);
  const auto d = parse_class("2H-E", g);
  EXPECT_EQ(grad_vol(g, d)(d), 6);
  EXPECT_THROW(grad_vol(g, parse_class("H-E", g)), DomainError);
  EXPECT_THROW(grad_vol(g, parse_class("H-2E", g)), DomainError);
}

TEST(Grad, EulerIdentity) {
  for (const auto& name : builtin_names()) {
    const auto g = builtin_geometry(name);
    Sampler s(31);
    for (int i = 0; i < 50; ++i) {
      const auto d = random_big(g, s);
      EXPECT_EQ(grad_vol(g, d)(d), 2 * vol(g, d));
    }
  }
}

TEST(Grad, MatchesCentralDifferences) {
  const Rational h(1, 10000);
  for (const auto& name : builtin_names()) {
    const auto g = builtin_geometry(name);
    Sampler s(37);
    int checked = 0;
    while (checked < 100) {
      const auto d = random_big(g, s);
      const auto support = zariski_decompose(g, d).support;
      bool straddles = false;
      for (std::size_t j = 0; j < g.rank(); ++j) {
        for (const auto& q : {d + h * g.basis_class(j), d - h * g.basis_class(j)}) {
          straddles = straddles || !is_big(g, q) || zariski_decompose(g, q).support != support;
        }
      }
      if (straddles) continue;
      const Covector grad = grad_vol(g, d);
      for (std::size_t j = 0; j < g.rank(); ++j) {
        const auto ej = g.basis_class(j);
        const Rational fd = (vol(g, d + h * ej) - vol(g, d - h * ej)) / (2 * h);
        const double err = std::abs(to_double(fd - grad.coords[j]));
        EXPECT_LE(err, 1e-6 * std::max(1.0, std::abs(to_double(grad.coords[j])))) << name;
      }
      ++checked;
    }
  }
}

TEST(SegmentProfile, Examples) {
  const auto g = builtin_geometry("bl1_p2");
  const auto alpha = parse_class("2H", g);
  const std::vector<Rational> ts{Rational(0), Rational(1, 2), Rational(1)};
  const auto p = segment_profile(g, alpha, parse_class("-E", g), ts);
  ASSERT_EQ(p.rows.size(), 3U);
  EXPECT_EQ(p.rows[0].volume, 4);
  EXPECT_EQ(p.rows[1].volume, Rational(15, 4));
  EXPECT_EQ(p.rows[2].volume, 3);
  EXPECT_EQ(*p.rows[1].derivative, -1);

  const auto up = segment_profile(g, alpha, parse_class("E", g), ts);
  for (const auto& r : up.rows) {
    EXPECT_EQ(r.volume, 4);
    EXPECT_EQ(*r.derivative, 0);
  }
}

TEST(SegmentProfile, DerivativeAbsentOffTheBigCone) {
  const auto g = builtin_geometry("bl1_p2");
  std::vector<Rational> ts;
  for (int i = 0; i <= 8; ++i) ts.push_back(ratio(i, 2));
  const auto p = segment_profile(g, parse_class("2H+E", g), parse_class("-E", g), ts);
  for (const auto& r : p.rows) {
    EXPECT_EQ(r.derivative.has_value(), r.volume > 0);
    EXPECT_GE(r.volume, 0);
  }
  for (std::size_t i = 1; i < p.rows.size(); ++i) EXPECT_GE(p.rows[i].chamber, p.rows[i - 1].chamber);
  const std::vector<Rational> unsorted{Rational(1), Rational(0)};
  EXPECT_THROW(segment_profile(g, parse_class("2H", g), parse_class("E", g), unsorted), DomainError);
}

TEST(ChamberScan, BlowupSegment) {
  const auto g = builtin_geometry("bl1_p2");
  const auto rep = chamber_scan(g, parse_class("2H+E", g), parse_class("-E", g), 0, 4);
  ASSERT_EQ(rep.walls, (std::vector<Rational>{Rational(1), Rational(3)}));
  ASSERT_EQ(rep.chambers.size(), 3U);
  EXPECT_EQ(rep.chambers[0].fitted, Polynomial({Rational(4)}));
  EXPECT_EQ(rep.chambers[1].fitted, Polynomial({Rational(3), Rational(2), Rational(-1)}));
  EXPECT_TRUE(rep.chambers[2].fitted.is_zero());
  EXPECT_EQ(rep.chambers[0].support, std::vector<std::size_t>{0});
  EXPECT_TRUE(rep.chambers[1].support.empty());
  EXPECT_EQ(rep.chambers[2].region, ConeRegion::not_pseff);
  ASSERT_EQ(rep.matches.size(), 2U);
  EXPECT_TRUE(rep.matches[0].value_match);
  EXPECT_TRUE(rep.matches[0].derivative_match);
  EXPECT_TRUE(rep.matches[0].interior_to_big_cone);
  EXPECT_TRUE(rep.matches[1].value_match);
  EXPECT_FALSE(rep.matches[1].interior_to_big_cone);
  EXPECT_EQ(rep.chamber_of(Rational(1)), 1U);
  EXPECT_EQ(rep.chamber_of(Rational(1, 2)), 0U);
}

TEST(ChamberScan, NefSegmentHasNoWalls) {
  const auto g = builtin_geometry("p1xp1");
  const auto rep = chamber_scan(g, parse_class("F1+F2", g), parse_class("F1", g), 0, 1);
  EXPECT_TRUE(rep.walls.empty());
  ASSERT_EQ(rep.chambers.size(), 1U);
  EXPECT_EQ(rep.chambers[0].fitted, Polynomial({Rational(2), Rational(2)}));
}

TEST(ChamberScan, RejectsDegenerateInput) {
  const auto g = builtin_geometry("bl1_p2");
  EXPECT_THROW(chamber_scan(g, g.basis_class(0), g.zero(), 0, 1), DomainError);
  EXPECT_THROW(chamber_scan(g, g.basis_class(0), g.basis_class(1), 1, 1), DomainError);
}

TEST(ChamberScan, RandomSegmentsAreExactAndC1InsideBigCone) {
  for (const auto& name : builtin_names()) {
    const auto g = builtin_geometry(name);
    Sampler s(41);
    for (int i = 0; i < 40; ++i) {
      const auto alpha = g.make_class(s.point(sample_box(g)));
      auto beta = g.make_class(s.point(sample_box(g)));
      if (beta.is_zero()) continue;
      const auto rep = chamber_scan(g, alpha, beta, Rational(-2), Rational(2));
      for (const auto& c : rep.chambers) {
        EXPECT_EQ(c.residual, 0);
        EXPECT_EQ(c.fitted, c.analytic);
        EXPECT_LE(c.fitted.degree(), 2);
        EXPECT_EQ(c.fitted.derivative_at((c.t_begin + c.t_end) / 2, 3), 0);
        // Independent spot check of the fit.
        for (int k = 1; k < 7; ++k) {
          const Rational t = c.t_begin + (c.t_end - c.t_begin) * ratio(k, 7);
          EXPECT_EQ(c.fitted(t), vol(g, alpha + t * beta)) << name;
        }
      }
      for (const auto& m : rep.matches) {
        EXPECT_TRUE(m.value_match) << name;
        if (m.interior_to_big_cone) {
          EXPECT_TRUE(m.derivative_match) << name;
        }
      }
    }
  }
}
