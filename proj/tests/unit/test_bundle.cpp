#include <gtest/gtest.h>

#include <cmath>

#include "volcone/bundle.hpp"
#include "volcone/class_parser.hpp"
#include "volcone/error.hpp"
#include "volcone/volume.hpp"

using namespace volcone;
using namespace volcone::bundle;

namespace {

DivisorClass deg(const BaseVolume& b, const Rational& m) { return b.make_class({m}); }

BundleModel curve_model(const Rational& a, const Rational& d) {
  auto base = curve_base();
  return make_model(base, deg(*base, a), deg(*base, d));
}

// P^1-like base whose volume is smooth but which hides its breakpoints.
class OpaqueBase : public BaseVolume {
 public:
  std::string name() const override { return "opaque"; }
  int dimension() const override { return 1; }
  std::size_t rank() const override { return 1; }
  DivisorClass make_class(RationalVector coords) const override {
    return DivisorClass("opaque", std::move(coords));
  }
  Rational vol(const DivisorClass& d) const override { return d[0] > 0 ? d[0] * d[0] * d[0] : Rational(0); }
  bool is_ample(const DivisorClass& d) const override { return d[0] > 0; }
  std::optional<std::vector<Rational>> breakpoints(const DivisorClass&, const DivisorClass&,
                                                   const Rational&, const Rational&) const override {
    return std::nullopt;
  }
};

double fd(const std::function<Rational(const Rational&)>& f, const Rational& t) {
  const Rational h(1, 1000000);
  return to_double((f(t + h) - f(t - h)) / (2 * h));
}

void expect_rel(double got, const Rational& want, double rel) {
  const double w = to_double(want);
  EXPECT_LE(std::abs(got - w), rel * std::max(1.0, std::abs(w))) << got << " vs " << w;
}

}  // namespace

TEST(Bases, CurveAndSurface) {
  auto p1 = curve_base();
  EXPECT_EQ(p1->dimension(), 1);
  EXPECT_EQ(p1->vol(deg(*p1, Rational(3, 2))), Rational(3, 2));
  EXPECT_EQ(p1->vol(deg(*p1, Rational(-1))), 0);
  EXPECT_TRUE(p1->is_ample(deg(*p1, Rational(1))));
  EXPECT_FALSE(p1->is_ample(deg(*p1, Rational(0))));
  auto bl1 = make_base("bl1_p2");
  EXPECT_EQ(bl1->dimension(), 2);
  EXPECT_TRUE(bl1->is_ample(bl1->make_class({Rational(2), Rational(-1)})));
  EXPECT_FALSE(bl1->is_ample(bl1->make_class({Rational(1), Rational(-1)})));
  EXPECT_FALSE(bl1->is_ample(bl1->make_class({Rational(1), Rational(0)})));
  EXPECT_EQ(make_base("p1")->name(), p1->name());
}

TEST(Calibration, FirstHirzebruchSurface) {
  auto p1 = curve_base();
  EXPECT_EQ(direct_total_volume(deg(*p1, Rational(1)), deg(*p1, Rational(0))), 1);
  EXPECT_EQ(direct_total_volume(deg(*p1, Rational(1)), deg(*p1, Rational(1))), 3);
  EXPECT_EQ(direct_total_volume(deg(*p1, Rational(2)), deg(*p1, Rational(0))), 2);
  const auto classes = default_calibration_classes(*p1);
  EXPECT_GE(classes.size(), 10U);
  for (int a = 1; a <= 3; ++a) {
    const auto cal = calibrate(*p1, deg(*p1, Rational(a)), classes);
    EXPECT_EQ(cal.kappa, 2) << "A = " << a;
    for (const auto& row : cal.rows) {
      if (row.ratio) {
        EXPECT_EQ(*row.ratio, 2);
      }
      EXPECT_EQ(2 * row.integral, row.direct);
    }
  }
}

TEST(Calibration, Errors) {
  auto p1 = curve_base();
  const auto classes = default_calibration_classes(*p1);
  EXPECT_THROW(calibrate(*p1, deg(*p1, Rational(0)), classes), PreconditionError);
  EXPECT_THROW(direct_total_volume(deg(*p1, Rational(1, 2)), deg(*p1, Rational(0))), CapabilityError);
  auto bl1 = make_base("bl1_p2");
  const auto h = bl1->make_class({Rational(1), Rational(0)});
  EXPECT_THROW(calibrate(*bl1, h, default_calibration_classes(*bl1)), CapabilityError);
}

TEST(Models, KappaChoice) {
  const auto m = curve_model(Rational(1), Rational(0));
  EXPECT_EQ(m.kappa, 2);
  EXPECT_TRUE(m.calibrated);
  auto bl1 = make_base("bl1_p2");
  const auto h = bl1->make_class({Rational(1), Rational(0)});
  const auto a = bl1->make_class({Rational(2), Rational(-1)});
  const auto s = make_model(bl1, a, h);
  EXPECT_EQ(s.kappa, 3);
  EXPECT_FALSE(s.calibrated);
  EXPECT_EQ(make_model(bl1, a, h, Rational(5)).kappa, 5);
  EXPECT_THROW(make_model(bl1, h, h), PreconditionError);
  EXPECT_THROW(make_model(bl1, a, h, Rational(0)), PreconditionError);
}

TEST(Wolfe, Examples) {
  const auto m = curve_model(Rational(1), Rational(0));
  const auto& p1 = *m.base;
  EXPECT_EQ(*wolfe_vol(m, deg(p1, Rational(0))).exact, 1);
  EXPECT_EQ(*wolfe_vol(m, deg(p1, Rational(1))).exact, 3);
  EXPECT_EQ(*wolfe_vol(m, deg(p1, Rational(-5))).exact, 0);

  auto bl1 = make_base("bl1_p2");
  const auto h = bl1->make_class({Rational(1), Rational(0)});
  const auto s = make_model(bl1, h + h - bl1->make_class({Rational(0), Rational(1)}), h);
  // Integrand over [0, 1] is Vol(E + sA); with A = H it is (1 + s)^2.
  const auto sh = make_model(bl1, bl1->make_class({Rational(2), Rational(-1)}), h);
  const auto hh = BundleModel{bl1, h, h, Rational(3), false};
  EXPECT_EQ(*wolfe_vol(hh, h).exact, 3 * Rational(7, 3));
  EXPECT_EQ(*wolfe_vol(sh, bl1->make_class({Rational(-9), Rational(0)})).exact, 0);
  EXPECT_TRUE(wolfe_vol(s, h).exact.has_value());
}

TEST(Wolfe, SurfaceKappaIsConsistentAcrossClasses) {
  auto bl1 = make_base("bl1_p2");
  const auto h = bl1->make_class({Rational(1), Rational(0)});
  const BundleModel m{bl1, h, h, Rational(3), false};
  // Vol(E + sH) = (e + s)^2 for E = eH, so the ratio to the closed integral is kappa.
  for (int e = 1; e <= 4; ++e) {
    const auto q = wolfe_vol(m, bl1->make_class({Rational(e), Rational(0)}));
    const Rational integral = Rational((e + 1) * (e + 1) * (e + 1) - e * e * e, 3);
    EXPECT_EQ(*q.exact / integral, m.kappa);
  }
}

TEST(Segments, PlusOnFirstHirzebruch) {
  const auto m = curve_model(Rational(1), Rational(0));
  for (int k = 0; k <= 8; ++k) {
    const Rational t = ratio(k, 4);
    EXPECT_EQ(*segment_plus(m, t).exact, 1 + 4 * t + 3 * t * t);
    EXPECT_EQ(segment_plus_derivative(m, t), 4 + 6 * t);
    EXPECT_EQ(*segment_plus(m, t).exact, direct_segment_volume(m, t));
  }
  EXPECT_EQ(*segment_plus(m, Rational(0)).exact, *wolfe_vol(m, m.divisor).exact);
  EXPECT_THROW(segment_plus(m, Rational(-1, 4)), DomainError);
}

TEST(Segments, MinusOnFirstHirzebruch) {
  const auto m = curve_model(Rational(1), Rational(0));
  for (int k = 0; k < 10; ++k) {
    const Rational t = ratio(k, 20);
    EXPECT_EQ(*segment_minus(m, t).exact, (1 - 2 * t) * (1 - 2 * t));
    EXPECT_EQ(segment_minus_derivative(m, t), -4 * (1 - 2 * t));
  }
  EXPECT_LT(to_double(*segment_minus(m, Rational(499, 1000)).exact), 1e-5);
  EXPECT_THROW(segment_minus(m, Rational(1, 2)), DomainError);
  const auto positive = curve_model(Rational(1), Rational(1));
  EXPECT_THROW(segment_minus(positive, Rational(0)), PreconditionError);
}

TEST(Segments, FiniteDifferencesMatchClosedForms) {
  std::vector<BundleModel> models{curve_model(Rational(1), Rational(0)),
                                  curve_model(Rational(2), Rational(-1)),
                                  curve_model(Rational(3), Rational(-3, 2))};
  auto bl1 = make_base("bl1_p2");
  const auto a = bl1->make_class({Rational(2), Rational(-1)});
  models.push_back(make_model(bl1, a, bl1->make_class({Rational(1), Rational(-1)}), Rational(3)));
  for (const auto& m : models) {
    for (int k = 1; k <= 50; ++k) {
      const Rational t = ratio(k, 37) + Rational(1, 1013);
      expect_rel(fd([&](const Rational& s) { return *segment_plus(m, s).exact; }, t),
                 segment_plus_derivative(m, t), 1e-6);
    }
    if (m.base->vol(m.divisor) != 0) continue;
    for (int k = 1; k <= 50; ++k) {
      const Rational t = ratio(k, 103) + Rational(1, 2029);
      expect_rel(fd([&](const Rational& s) { return *segment_minus(m, s).exact; }, t),
                 segment_minus_derivative(m, t), 1e-6);
    }
  }
  const auto m = models[0];
  expect_rel(fd([&](const Rational& s) { return *segment_plus(m, s).exact; }, Rational(1, 4)),
             segment_plus_derivative(m, Rational(1, 4)), 1e-6);
  expect_rel(fd([&](const Rational& s) { return *segment_minus(m, s).exact; }, Rational(1, 5)),
             segment_minus_derivative(m, Rational(1, 5)), 1e-6);
}

TEST(Segments, HomogeneityTransfer) {
  auto bl2 = make_base("bl2_p2");
  const auto a = bl2->make_class({Rational(3), Rational(-1), Rational(-1)});
  const auto d = bl2->make_class({Rational(1), Rational(0), Rational(-1)});
  const auto m = make_model(bl2, a, d);
  for (int k = 0; k <= 6; ++k) {
    const Rational t = ratio(k, 3);
    const Rational lambda = 1 + t;
    const DivisorClass e = (1 / lambda) * (d + t * a);
    EXPECT_EQ(*segment_plus(m, t).exact, lambda * lambda * lambda * *wolfe_vol(m, e).exact);
  }
  const auto c = curve_model(Rational(2), Rational(1, 3));
  for (int k = 0; k <= 6; ++k) {
    const Rational t = ratio(k, 5);
    const Rational lambda = 1 + t;
    const DivisorClass e = (1 / lambda) * (c.divisor + t * c.ample);
    EXPECT_EQ(*segment_plus(c, t).exact, lambda * lambda * *wolfe_vol(c, e).exact);
  }
}

TEST(Quadrature, AdaptiveWhenBreakpointsAreUnknown) {
  OpaqueBase base;
  const auto e = base.make_class({Rational(-1, 3)});
  const auto a = base.make_class({Rational(1)});
  const auto q = integrate_base_segment(base, e, a, Rational(0), Rational(1));
  EXPECT_EQ(q.scheme, Scheme::adaptive);
  EXPECT_FALSE(q.exact.has_value());
  // int_{1/3}^{1} (u - 1/3)^3 du = (2/3)^4 / 4
  EXPECT_NEAR(q.value, std::pow(2.0 / 3.0, 4) / 4, 1e-9);
  EXPECT_GT(q.subdivision.size(), 1U);
  EXPECT_THROW(base_segment_pieces(base, e, a, Rational(0), Rational(1)), CapabilityError);
}

TEST(Quadrature, ExactPiecewiseAndReversed) {
  auto p1 = curve_base();
  const auto e = deg(*p1, Rational(-1, 2));
  const auto a = deg(*p1, Rational(1));
  const auto q = integrate_base_segment(*p1, e, a, Rational(0), Rational(2));
  EXPECT_EQ(q.scheme, Scheme::exact_piecewise);
  EXPECT_EQ(*q.exact, Rational(9, 8));
  EXPECT_EQ(q.subdivision, (std::vector<Rational>{Rational(0), Rational(1, 2), Rational(2)}));
  EXPECT_EQ(*integrate_base_segment(*p1, e, a, Rational(2), Rational(0)).exact, Rational(-9, 8));
  EXPECT_EQ(*integrate_base_segment(*p1, e, a, Rational(1), Rational(1)).exact, 0);
}

TEST(Quadrature, SurfacePiecesMatchChamberScan) {
  auto bl1 = make_base("bl1_p2");
  const auto d = bl1->make_class({Rational(1), Rational(-1)});
  const auto a = bl1->make_class({Rational(1), Rational(0)});
  const auto pieces = base_segment_pieces(*bl1, d, a, Rational(-1), Rational(2));
  ASSERT_EQ(pieces.size(), 2U);
  EXPECT_EQ(pieces[0].u_end, 0);
  EXPECT_TRUE(pieces[0].poly.is_zero());
  EXPECT_EQ(pieces[1].poly, Polynomial({Rational(0), Rational(2), Rational(1)}));
}

TEST(Transfer, BlowupBoundaryGainsADerivative) {
  auto bl1 = make_base("bl1_p2");
  const auto d = bl1->make_class({Rational(1), Rational(-1)});
  const auto a = bl1->make_class({Rational(2), Rational(-1)});
  const auto m = make_model(bl1, a, d);
  const auto r = transfer_regularity_report(m, Rational(0), Rational(1), 10);
  EXPECT_EQ(r.rows.size(), 11U);
  ASSERT_EQ(r.base_walls, std::vector<Rational>{Rational(0)});
  ASSERT_EQ(r.events.size(), 1U);
  EXPECT_EQ(r.events[0].t, 0);
  EXPECT_EQ(r.events[0].endpoint, "lower");
  EXPECT_EQ(r.events[0].base_order, 0);
  EXPECT_EQ(r.events[0].bundle_order, 1);
  EXPECT_FALSE(r.events[0].interior);
  for (const auto& row : r.rows) {
    // Vol_B(D + uA) = 3u^2 + 2u for u >= 0, so the second derivative is
    // kappa (4 (6(1+2t) + 2) - (6t + 2)) away from u = 0.
    if (row.t == 0) continue;
    const double k = to_double(m.kappa);
    const double t = to_double(row.t);
    EXPECT_NEAR(row.second_derivative, k * (4 * (6 * (1 + 2 * t) + 2) - (6 * t + 2)), 1e-5);
  }
}

TEST(Transfer, WallsShiftUnderTheChangeOfVariable) {
  auto bl2 = make_base("bl2_p2");
  const auto d = bl2->make_class({Rational(1), Rational(-1), Rational(0)});
  const auto a = bl2->make_class({Rational(3), Rational(-1), Rational(-1)});
  const auto m = make_model(bl2, a, d);
  const auto r = transfer_regularity_report(m, Rational(0), Rational(3), 6);
  const auto scan = chamber_scan(*bl2->geometry(), d, a, Rational(-1), Rational(8));
  for (const auto& ev : r.events) {
    EXPECT_NE(std::find(scan.walls.begin(), scan.walls.end(), ev.base_u), scan.walls.end());
    EXPECT_EQ(ev.t, ev.endpoint == "lower" ? ev.base_u : (ev.base_u - 1) / 2);
    if (ev.base_order) {
      EXPECT_EQ(*ev.bundle_order, *ev.base_order + 1);
    }
  }
  EXPECT_FALSE(r.events.empty());
}

TEST(Transfer, CurveBaseIsSmoothInside) {
  const auto m = curve_model(Rational(1), Rational(0));
  const auto r = transfer_regularity_report(m, Rational(0), Rational(2), 8);
  for (const auto& ev : r.events) EXPECT_FALSE(ev.interior);
  for (const auto& row : r.rows) EXPECT_EQ(*row.value.exact, 1 + 4 * row.t + 3 * row.t * row.t);
  EXPECT_THROW(transfer_regularity_report(m, Rational(1), Rational(1), 4), DomainError);
}
