#include <gtest/gtest.h>

#include <cmath>

#include "volcone/class_parser.hpp"
#include "volcone/error.hpp"
#include "volcone/regularity.hpp"
#include "volcone/volume.hpp"

using namespace volcone;
using namespace volcone::probe;

namespace {

ProbeOptions opts(std::size_t samples, std::uint64_t seed, unsigned threads = 1) {
  ProbeOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = threads;
  return o;
}

ClassFunction vol_of(const SurfaceGeometry& g) {
  return [&g](const DivisorClass& d) { return vol(g, d); };
}

std::vector<DivisorClass> blowup_grid(const SurfaceGeometry& g, int n) {
  std::vector<DivisorClass> grid;
  for (int i = 0; i <= n; ++i) {
    const Rational b = Rational(-1, 2) + ratio(i, n);
    grid.push_back(g.make_class({Rational(2), -b}));
  }
  return grid;
}

}  // namespace

TEST(KhovanskiiTeissier, Examples) {
  const auto q = builtin_geometry("p1xp1");
  EXPECT_EQ(kt_check(q, q.make_class({Rational(1), Rational(2)}), q.make_class({Rational(2), Rational(1)})), 9);
  const auto a = q.make_class({Rational(3), Rational(1, 2)});
  EXPECT_EQ(kt_check(q, a, a), 0);
  const auto g = builtin_geometry("bl1_p2");
  EXPECT_EQ(kt_check(g, parse_class("H", g), parse_class("H-E", g)), 1);
  EXPECT_THROW(kt_check(g, parse_class("2H+E", g), parse_class("H", g)), PreconditionError);
}

TEST(KhovanskiiTeissier, ProbeHoldsOnEveryBuiltin) {
  for (const auto& name : builtin_names()) {
    const auto g = builtin_geometry(name);
    const auto r = kt_probe(g, default_region(g), opts(300, 3));
    EXPECT_TRUE(r.passed) << name;
    EXPECT_GE(r.statistic, 0.0) << name;
    EXPECT_EQ(r.details["negative_margins"], 0U);
    EXPECT_EQ(r.details["proportional_nonzero"], 0U);
  }
}

TEST(Concavity, RootVolumeOnBlowups) {
  for (const std::string name : {"bl1_p2", "bl2_p2"}) {
    const auto g = builtin_geometry(name);
    const auto r = concavity_check(g, vol_of(g), "vol", Rational(1, 2), default_region(g), opts(500, 5));
    EXPECT_TRUE(r.passed) << name;
    EXPECT_GE(r.statistic, -1e-9);
  }
}

TEST(Concavity, PositiveProductAgainstH) {
  const auto g = builtin_geometry("bl1_p2");
  const auto fn = positive_product_against(g, parse_class("H", g));
  EXPECT_EQ(fn(parse_class("3H-E", g)), 3);
  EXPECT_EQ(fn(parse_class("3H+2E", g)), 3);
  EXPECT_EQ(fn(parse_class("H-2E", g)), 0);
  const auto r = concavity_check(g, fn, "H.<a>", Rational(1), default_region(g), opts(500, 6));
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.statistic, -1e-9);
}

TEST(Concavity, NefChamberOfQuadric) {
  const auto g = builtin_geometry("p1xp1");
  const Box box{{Rational(1, 2), Rational(1, 2)}, {Rational(3), Rational(3)}};
  const auto r = concavity_check(g, vol_of(g), "vol", Rational(1, 2), box, opts(300, 7));
  EXPECT_GE(r.statistic, -1e-12);
}

TEST(Concavity, WitnessReproducesMargin) {
  const auto g = builtin_geometry("bl2_p2");
  const auto r = concavity_check(g, vol_of(g), "vol", Rational(1, 2), default_region(g), opts(200, 8));
  ASSERT_EQ(r.witnesses.size(), 1U);
  const auto& w = r.witnesses[0].points;
  ASSERT_EQ(w.size(), 3U);
  const auto x = g.make_class(w[0]);
  const auto y = g.make_class(w[1]);
  const Rational t = w[2][0];
  auto root = [&](const DivisorClass& d) { return std::sqrt(to_double(vol(g, d))); };
  const double margin = root(t * x + (1 - t) * y) - to_double(t) * root(x) - to_double(1 - t) * root(y);
  EXPECT_NEAR(margin, r.statistic, 1e-12);
}

TEST(Concavity, RejectsBadInput) {
  const auto g = builtin_geometry("bl1_p2");
  EXPECT_THROW(concavity_check(g, vol_of(g), "vol", Rational(1, 3), default_region(g), opts(10, 1)),
               PreconditionError);
  const Box outside{{Rational(-4), Rational(-4)}, {Rational(-1), Rational(-1)}};
  EXPECT_THROW(concavity_check(g, vol_of(g), "vol", Rational(1, 2), outside, opts(10, 1)),
               PreconditionError);
}

TEST(Hessian, EntryExamples) {
  const auto g = builtin_geometry("bl1_p2");
  const auto e = parse_class("E", g);
  const auto h = parse_class("H", g);
  const Rational step(1, 100);
  EXPECT_EQ(hessian_entry(g, parse_class("2H+1/2E", g), e, e, step), 0);
  EXPECT_EQ(hessian_entry(g, parse_class("2H-1/2E", g), e, e, step), -2);
  EXPECT_EQ(hessian_entry(g, parse_class("2H-1/2E", g), h, h, step), 2);
  const auto q = builtin_geometry("p1xp1");
  const auto x = q.make_class({Rational(2), Rational(3)});
  EXPECT_EQ(hessian_entry(q, x, q.basis_class(0), q.basis_class(1), step), 2);
  EXPECT_EQ(hessian_entry(q, x, q.basis_class(0), q.basis_class(0), step), 0);
  EXPECT_THROW(hessian_entry(g, h, e, e, Rational(0)), PreconditionError);
}

TEST(Hessian, JumpAcrossTheBlowupWall) {
  const auto g = builtin_geometry("bl1_p2");
  const auto grid = blowup_grid(g, 40);
  const auto e = parse_class("E", g);
  const auto r = hessian_probe(g, grid, e, e, Rational(1, 100));
  EXPECT_TRUE(r.details["jump_detected"].get<bool>());
  EXPECT_NEAR(r.details["jump"].get<double>(), 2.0, 1e-3);
  EXPECT_NEAR(r.statistic, 2.0, 1e-3);
  const auto between = r.details["jump_between"];
  const auto left = grid[between[0].get<std::size_t>()];
  const auto right = grid[between[1].get<std::size_t>()];
  EXPECT_GE(left[1], 0);
  EXPECT_LT(right[1], 0);

  const auto hh = hessian_probe(g, grid, parse_class("H", g), parse_class("H", g), Rational(1, 100));
  EXPECT_FALSE(hh.details["jump_detected"].get<bool>());
  EXPECT_NEAR(hh.statistic, 2.0, 1e-12);
}

TEST(Hessian, StableUnderStepRefinement) {
  for (const std::string name : {"bl1_p2", "bl2_p2", "hirzebruch_2"}) {
    const auto g = builtin_geometry(name);
    Sampler s(11);
    std::vector<DivisorClass> grid;
    const Box box = default_region(g);
    while (grid.size() < 30) {
      auto d = g.make_class(s.point(box));
      if (is_big(g, d)) grid.push_back(d);
    }
    const double coarse = hessian_sup(g, grid, Rational(1, 100)).statistic;
    const double fine = hessian_sup(g, grid, Rational(1, 1000)).statistic;
    EXPECT_TRUE(std::isfinite(coarse));
    EXPECT_NEAR(coarse, fine, 0.05 * std::max(coarse, fine)) << name;
  }
}

TEST(GradientLipschitz, BlowupBoxBound) {
  const auto g = builtin_geometry("bl1_p2");
  const Box box{{Rational(3, 2), Rational(-1, 2)}, {Rational(5, 2), Rational(1, 2)}};
  const auto r = lipschitz_gradient_estimate(g, box, opts(2000, 13));
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.statistic, 2.0 + 1e-9);
  EXPECT_GT(r.details["cross_wall_pairs"].get<std::size_t>(), 0U);
  EXPECT_EQ(r.details["chamber_bound"]["exact"], "2");
}

TEST(GradientLipschitz, RejectsBoxLeavingTheBigCone) {
  const auto g = builtin_geometry("bl1_p2");
  const Box box{{Rational(1, 2), Rational(-1)}, {Rational(5, 2), Rational(1, 2)}};
  try {
    lipschitz_gradient_estimate(g, box, opts(10, 1));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    const std::string corner = to_string(RationalVector{Rational(1, 2), Rational(-1)});
    EXPECT_NE(std::string(e.what()).find("big cone at " + corner), std::string::npos) << e.what();
  }
}

TEST(GradientLipschitz, DegeneratePairsAreSkipped) {
  const auto g = builtin_geometry("p2");
  const Box box{{Rational(1)}, {Rational(1)}};
  const auto r = lipschitz_gradient_estimate(g, box, opts(20, 1));
  EXPECT_EQ(r.details["skipped_identical_pairs"].get<std::size_t>(), 20U);
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(Boundary, OneSidedDerivativesAtHminusE) {
  const auto g = builtin_geometry("bl1_p2");
  const auto alpha = parse_class("H-E", g);
  const auto into = one_sided_derivatives(g, alpha, parse_class("H+E", g));
  EXPECT_EQ(into.right, 4);
  EXPECT_EQ(into.left, 0);
  const auto along_h = one_sided_derivatives(g, alpha, parse_class("H", g));
  EXPECT_EQ(along_h.right, 2);
}

TEST(Boundary, ProbeIsBoundedAndSeesTheKink) {
  const auto g = builtin_geometry("bl1_p2");
  const auto alpha = parse_class("H-E", g);
  const std::vector<DivisorClass> dirs{parse_class("H+E", g), parse_class("H", g)};
  const auto r = boundary_lipschitz_probe(g, alpha, dirs, Rational(1, 4), opts(2000, 17), 4.0 + 1e-6);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.statistic, 4.0 + 1e-6);
  EXPECT_GE(r.details["max_one_sided_mismatch"]["decimal"].get<double>(), 0.1);
  EXPECT_GT(r.details["samples_into_big_cone"].get<std::size_t>(), 0U);
  ASSERT_EQ(r.witnesses.size(), 1U);
  const auto h = g.make_class(r.witnesses[0].points.at(0));
  const Rational norm = abs(h[0]) + abs(h[1]);
  EXPECT_NEAR(to_double(vol(g, alpha + h) / norm), r.witnesses[0].value, 1e-12);
}

TEST(Boundary, RejectsInteriorAndNonPseff) {
  const auto g = builtin_geometry("bl1_p2");
  const std::vector<DivisorClass> dirs{parse_class("H", g)};
  EXPECT_THROW(boundary_lipschitz_probe(g, parse_class("2H", g), dirs, Rational(1, 4), opts(10, 1)),
               PreconditionError);
  EXPECT_THROW(boundary_lipschitz_probe(g, parse_class("H-2E", g), dirs, Rational(1, 4), opts(10, 1)),
               PreconditionError);
}

TEST(Probes, DeterministicAndThreadIndependent) {
  const auto g = builtin_geometry("bl2_p2");
  const auto a = to_json(concavity_check(g, vol_of(g), "vol", Rational(1, 2), default_region(g), opts(200, 21, 1)));
  const auto b = to_json(concavity_check(g, vol_of(g), "vol", Rational(1, 2), default_region(g), opts(200, 21, 4)));
  EXPECT_EQ(a.dump(), b.dump());
  const auto c = to_json(kt_probe(g, default_region(g), opts(100, 21, 1)));
  const auto d = to_json(kt_probe(g, default_region(g), opts(100, 21, 3)));
  EXPECT_EQ(c.dump(), d.dump());
  const auto e = to_json(kt_probe(g, default_region(g), opts(100, 22, 1)));
  EXPECT_NE(c.dump(), e.dump());
}
