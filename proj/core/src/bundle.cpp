#include "volcone/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "volcone/error.hpp"
#include "volcone/geometry_io.hpp"
#include "volcone/toric.hpp"
#include "volcone/volume.hpp"
#include "volcone/zariski.hpp"

namespace volcone::bundle {

namespace {

const std::string kCurveId = "p1";

class CurveBase final : public BaseVolume {
 public:
  std::string name() const override { return kCurveId; }
  int dimension() const override { return 1; }
  std::size_t rank() const override { return 1; }
  DivisorClass make_class(RationalVector coords) const override {
    if (coords.size() != 1) throw GeometryMismatch("classes on P^1 have one coordinate");
    return DivisorClass(kCurveId, std::move(coords));
  }
  Rational vol(const DivisorClass& d) const override {
    require(d);
    return std::max(d[0], Rational(0));
  }
  bool is_ample(const DivisorClass& d) const override {
    require(d);
    return d[0] > 0;
  }
  std::optional<std::vector<Rational>> breakpoints(const DivisorClass& e, const DivisorClass& a,
                                                   const Rational& u0,
                                                   const Rational& u1) const override {
    require(e);
    require(a);
    std::vector<Rational> out;
    if (a[0] != 0) {
      Rational u = -e[0] / a[0];
      if (u0 < u && u < u1) out.push_back(u);
    }
    return out;
  }

 private:
  static void require(const DivisorClass& d) {
    if (d.geometry_id() != kCurveId || d.size() != 1) {
      throw GeometryMismatch("class does not live on P^1");
    }
  }
};

class SurfaceBase final : public BaseVolume {
 public:
  explicit SurfaceBase(SurfaceGeometry g) : g_(std::move(g)) { g_.validate(); }

  std::string name() const override { return g_.name; }
  int dimension() const override { return 2; }
  std::size_t rank() const override { return g_.rank(); }
  DivisorClass make_class(RationalVector coords) const override {
    return g_.make_class(std::move(coords));
  }
  Rational vol(const DivisorClass& d) const override { return volcone::vol(g_, d); }
  bool is_ample(const DivisorClass& d) const override {
    if (!is_big(g_, d) || !is_nef(g_, d)) return false;
    return std::all_of(g_.negative_curves.begin(), g_.negative_curves.end(),
                       [&](const DivisorClass& c) { return g_.intersect(d, c) > 0; });
  }
  std::optional<std::vector<Rational>> breakpoints(const DivisorClass& e, const DivisorClass& a,
                                                   const Rational& u0,
                                                   const Rational& u1) const override {
    if (!(u0 < u1) || a.is_zero()) return std::vector<Rational>{};
    return chamber_scan(g_, e, a, u0, u1).walls;
  }
  const SurfaceGeometry* geometry() const override { return &g_; }

 private:
  SurfaceGeometry g_;
};

Rational base_value(const BaseVolume& base, const DivisorClass& e, const DivisorClass& a,
                    const Rational& u) {
  return base.vol(e + u * a);
}

std::vector<Rational> subdivision(const BaseVolume& base, const DivisorClass& e,
                                  const DivisorClass& a, const Rational& u0, const Rational& u1) {
  auto walls = base.breakpoints(e, a, u0, u1);
  if (!walls) throw CapabilityError("base '" + base.name() + "' does not report breakpoints");
  std::vector<Rational> cuts{u0};
  for (const auto& w : *walls) {
    if (u0 < w && w < u1) cuts.push_back(w);
  }
  cuts.push_back(u1);
  return cuts;
}

struct AdaptiveState {
  const BaseVolume& base;
  const DivisorClass& e;
  const DivisorClass& a;
  std::vector<Rational> leaves;
  double error = 0.0;
};

double adaptive(AdaptiveState& s, const Rational& lo, const Rational& hi, double flo, double fmid,
                double fhi, double whole, double tol, int depth) {
  const Rational mid = (lo + hi) / 2;
  const Rational lm = (lo + mid) / 2, rm = (mid + hi) / 2;
  const double flm = to_double(base_value(s.base, s.e, s.a, lm));
  const double frm = to_double(base_value(s.base, s.e, s.a, rm));
  const double h = to_double(hi - lo);
  const double left = h / 12 * (flo + 4 * flm + fmid);
  const double right = h / 12 * (fmid + 4 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) {
    s.leaves.push_back(hi);
    s.error += std::abs(delta) / 15;
    return left + right + delta / 15;
  }
  return adaptive(s, lo, mid, flo, flm, fmid, left, tol / 2, depth - 1) +
         adaptive(s, mid, hi, fmid, frm, fhi, right, tol / 2, depth - 1);
}

QuadratureResult scale(QuadratureResult q, const Rational& kappa) {
  if (q.exact) {
    q.exact = *q.exact * kappa;
    q.value = to_double(*q.exact);
  } else {
    q.value *= to_double(kappa);
  }
  q.error_bound *= to_double(volcone::abs(kappa));
  return q;
}

void require_curve_class(const DivisorClass& d, const char* what) {
  if (d.geometry_id() != kCurveId || d.size() != 1) {
    throw GeometryMismatch(std::string(what) + " must be a class on P^1");
  }
}

// Smoothness order at u of the joint of two polynomial pieces; nullopt when they agree.
std::optional<int> joint_order(const Polynomial& left, const Polynomial& right, const Rational& u) {
  if (left == right) return std::nullopt;
  const int top = std::max(left.degree(), right.degree());
  for (int k = 0; k <= top; ++k) {
    if (left.derivative_at(u, k) != right.derivative_at(u, k)) return k - 1;
  }
  return std::nullopt;
}

}  // namespace

std::shared_ptr<const BaseVolume> curve_base() { return std::make_shared<CurveBase>(); }

std::shared_ptr<const BaseVolume> surface_base(SurfaceGeometry geometry) {
  return std::make_shared<SurfaceBase>(std::move(geometry));
}

std::shared_ptr<const BaseVolume> make_base(std::string_view source) {
  if (source == kCurveId) return curve_base();
  return surface_base(resolve_geometry(source));
}

std::vector<BasePiece> base_segment_pieces(const BaseVolume& base, const DivisorClass& d,
                                           const DivisorClass& a, const Rational& u0,
                                           const Rational& u1) {
  if (!(u0 < u1)) throw DomainError("piece range must satisfy u0 < u1");
  const std::vector<Rational> cuts = subdivision(base, d, a, u0, u1);
  std::vector<BasePiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational& lo = cuts[i];
    const Rational& hi = cuts[i + 1];
    std::vector<Rational> xs, ys;
    for (int k = 1; k <= 4; ++k) {
      xs.push_back(lo + (hi - lo) * ratio(k, 5));
      ys.push_back(base_value(base, d, a, xs.back()));
    }
    pieces.push_back({lo, hi, Polynomial::interpolate(xs, ys)});
  }
  return pieces;
}

QuadratureResult integrate_base_segment(const BaseVolume& base, const DivisorClass& e,
                                        const DivisorClass& a, const Rational& u0,
                                        const Rational& u1, double tol) {
  QuadratureResult result;
  if (u0 == u1) {
    result.exact = Rational(0);
    result.subdivision = {u0, u1};
    return result;
  }
  if (u1 < u0) {
    QuadratureResult flipped = integrate_base_segment(base, e, a, u1, u0, tol);
    return scale(std::move(flipped), Rational(-1));
  }

  if (base.breakpoints(e, a, u0, u1)) {
    // Simpson's rule is exact on each polynomial piece (degree <= 3).
    result.scheme = Scheme::exact_piecewise;
    result.subdivision = subdivision(base, e, a, u0, u1);
    Rational total = 0;
    for (std::size_t i = 0; i + 1 < result.subdivision.size(); ++i) {
      const Rational& lo = result.subdivision[i];
      const Rational& hi = result.subdivision[i + 1];
      const Rational mid = (lo + hi) / 2;
      total += (hi - lo) / 6 *
               (base_value(base, e, a, lo) + 4 * base_value(base, e, a, mid) +
                base_value(base, e, a, hi));
    }
    result.exact = total;
    result.value = to_double(total);
    return result;
  }

  result.scheme = Scheme::adaptive;
  AdaptiveState state{base, e, a, {u0}, 0.0};
  const Rational mid = (u0 + u1) / 2;
  const double flo = to_double(base_value(base, e, a, u0));
  const double fmid = to_double(base_value(base, e, a, mid));
  const double fhi = to_double(base_value(base, e, a, u1));
  const double whole = to_double(u1 - u0) / 6 * (flo + 4 * fmid + fhi);
  result.value = adaptive(state, u0, u1, flo, fmid, fhi, whole, tol, 40);
  result.error_bound = state.error;
  result.subdivision = std::move(state.leaves);
  return result;
}

Rational direct_total_volume(const DivisorClass& a, const DivisorClass& e) {
  require_curve_class(a, "A");
  require_curve_class(e, "E");
  if (a[0].get_den() != 1 || a[0] < 1) {
    throw CapabilityError("the total-space oracle needs A of integer degree >= 1, got " +
                          to_string(a[0]));
  }
  const long degree = a[0].get_num().get_si();
  const toric::ToricSurface surface = toric::builtin_toric("hirzebruch_" + std::to_string(degree));
  // xi + pi^*E = C0 + (a + E) f on F_a, with C0 the negative section.
  const RationalVector coords{Rational(1), a[0] + e[0]};
  return toric::volume_exact(surface, surface.coefficients_for(coords));
}

std::vector<DivisorClass> default_calibration_classes(const BaseVolume& base) {
  std::vector<DivisorClass> out;
  if (base.dimension() == 1) {
    const Rational degrees[] = {Rational(0),    Rational(1),    Rational(2),     Rational(3),
                                Rational(4),    Rational(1, 2), Rational(-1, 2), Rational(1, 3),
                                Rational(5, 2), Rational(-1, 4), Rational(-2)};
    for (const auto& d : degrees) out.push_back(base.make_class({d}));
    return out;
  }
  out.push_back(base.make_class(RationalVector(base.rank(), Rational(0))));
  for (std::size_t i = 0; i < base.rank(); ++i) {
    for (int s : {1, 2}) {
      RationalVector c(base.rank(), Rational(0));
      c[i] = s;
      out.push_back(base.make_class(c));
    }
  }
  return out;
}

Calibration calibrate(const BaseVolume& base, const DivisorClass& a,
                      std::span<const DivisorClass> test_classes) {
  if (base.dimension() != 1) {
    throw CapabilityError("no total-space volume oracle for bundles over '" + base.name() + "'");
  }
  if (!base.is_ample(a)) throw PreconditionError("A must be ample on the base");
  Calibration cal;
  std::optional<Rational> kappa;
  for (const auto& e : test_classes) {
    CalibrationRow row{e, Rational(0), Rational(0), std::nullopt};
    QuadratureResult q = integrate_base_segment(base, e, a, Rational(0), Rational(1));
    if (!q.exact) throw CapabilityError("calibration needs exact quadrature");
    row.integral = *q.exact;
    row.direct = direct_total_volume(a, e);
    if (row.integral == 0 && row.direct == 0) {
      cal.rows.push_back(std::move(row));
      continue;
    }
    if (row.integral == 0 || row.direct == 0) {
      throw Error("calibration inconsistent at E = " + to_string(e.coords()) + ": integral " +
                  to_string(row.integral) + " vs direct volume " + to_string(row.direct));
    }
    row.ratio = row.direct / row.integral;
    if (kappa && *kappa != *row.ratio) {
      throw Error("calibration inconsistent: ratio " + to_string(*row.ratio) + " at E = " +
                  to_string(e.coords()) + " differs from " + to_string(*kappa));
    }
    kappa = row.ratio;
    cal.rows.push_back(std::move(row));
  }
  if (!kappa) throw Error("calibration needs at least one test class with positive volume");
  cal.kappa = *kappa;
  return cal;
}

BundleModel make_model(std::shared_ptr<const BaseVolume> base, DivisorClass a, DivisorClass d,
                       std::optional<Rational> kappa_override) {
  if (!base) throw PreconditionError("bundle model needs a base");
  if (!base->is_ample(a)) {
    throw PreconditionError("A = " + to_string(a.coords()) + " is not ample on " + base->name());
  }
  if (d.geometry_id() != a.geometry_id() || d.size() != a.size()) {
    throw GeometryMismatch("A and D live on different bases");
  }
  BundleModel model{base, std::move(a), std::move(d), Rational(0), false};
  if (kappa_override) {
    if (*kappa_override <= 0) throw PreconditionError("kappa must be positive");
    model.kappa = *kappa_override;
  } else if (base->dimension() == 1) {
    const auto classes = default_calibration_classes(*base);
    model.kappa = calibrate(*base, model.ample, classes).kappa;
    model.calibrated = true;
  } else {
    model.kappa = base->dimension() + 1;
  }
  return model;
}

QuadratureResult wolfe_vol(const BundleModel& model, const DivisorClass& e) {
  return scale(integrate_base_segment(*model.base, e, model.ample, Rational(0), Rational(1)),
               model.kappa);
}

QuadratureResult segment_plus(const BundleModel& model, const Rational& t) {
  if (t < 0) throw DomainError("segment_plus needs t >= 0; use segment_minus");
  return scale(integrate_base_segment(*model.base, model.divisor, model.ample, t, 1 + 2 * t),
               model.kappa);
}

Rational segment_plus_derivative(const BundleModel& model, const Rational& t) {
  if (t < 0) throw DomainError("segment_plus needs t >= 0; use segment_minus");
  const BaseVolume& b = *model.base;
  return 2 * model.kappa * base_value(b, model.divisor, model.ample, 1 + 2 * t) -
         model.kappa * base_value(b, model.divisor, model.ample, t);
}

namespace {

void require_minus(const BundleModel& model, const Rational& t) {
  if (t < 0 || t >= Rational(1, 2)) throw DomainError("segment_minus needs 0 <= t < 1/2");
  if (model.base->vol(model.divisor) != 0) {
    throw PreconditionError("segment_minus is derived under Vol_B(D) = 0; D = " +
                            to_string(model.divisor.coords()) + " has positive volume");
  }
}

}  // namespace

QuadratureResult segment_minus(const BundleModel& model, const Rational& t) {
  require_minus(model, t);
  return scale(
      integrate_base_segment(*model.base, model.divisor, model.ample, Rational(0), 1 - 2 * t),
      model.kappa);
}

Rational segment_minus_derivative(const BundleModel& model, const Rational& t) {
  require_minus(model, t);
  return -2 * model.kappa * base_value(*model.base, model.divisor, model.ample, 1 - 2 * t);
}

Rational direct_segment_volume(const BundleModel& model, const Rational& t) {
  if (model.base->dimension() != 1) {
    throw CapabilityError("direct segment volume is only available over P^1");
  }
  const Rational a = model.ample[0];
  const long degree = a.get_num().get_si();
  if (a.get_den() != 1 || degree < 1) throw CapabilityError("A must have integer degree >= 1");
  const toric::ToricSurface surface = toric::builtin_toric("hirzebruch_" + std::to_string(degree));
  const RationalVector coords{1 + t, (1 + t) * a + model.divisor[0] + t * a};
  return toric::volume_exact(surface, surface.coefficients_for(coords));
}

TransferReport transfer_regularity_report(const BundleModel& model, const Rational& t0,
                                          const Rational& t1, std::size_t steps) {
  if (t0 < 0 || !(t0 < t1)) throw DomainError("transfer report needs 0 <= t0 < t1");
  if (steps == 0) throw DomainError("transfer report needs at least one step");
  const BaseVolume& base = *model.base;
  const Rational h(1, 1000000);
  auto base_slope = [&](const Rational& u) {
    return to_double(base_value(base, model.divisor, model.ample, u + h) -
                     base_value(base, model.divisor, model.ample, u - h)) /
           (2 * to_double(h));
  };

  TransferReport report;
  for (std::size_t i = 0; i <= steps; ++i) {
    const Rational t = t0 + (t1 - t0) * ratio(static_cast<long>(i), static_cast<long>(steps));
    TransferRow row;
    row.t = t;
    row.value = segment_plus(model, t);
    row.derivative = segment_plus_derivative(model, t);
    const double k = to_double(model.kappa);
    row.second_derivative = 4 * k * base_slope(1 + 2 * t) - k * base_slope(t);
    report.rows.push_back(std::move(row));
  }

  // Pieces over a window wider than [t0, 1 + 2 t1] so walls at the ends have two sides.
  const Rational lo = t0 - 1, hi = 2 + 2 * t1;
  const std::vector<BasePiece> pieces = base_segment_pieces(base, model.divisor, model.ample, lo, hi);
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Rational u = pieces[i].u_end;
    if (u < t0 || u > 1 + 2 * t1) continue;
    report.base_walls.push_back(u);
    const std::optional<int> order = joint_order(pieces[i].poly, pieces[i + 1].poly, u);
    const std::optional<int> lifted = order ? std::optional<int>(*order + 1) : std::nullopt;
    const Rational lower_t = u;
    const Rational upper_t = (u - 1) / 2;
    if (t0 <= lower_t && lower_t <= t1) {
      report.events.push_back({u, lower_t, "lower", order, lifted, t0 < lower_t && lower_t < t1});
    }
    if (t0 <= upper_t && upper_t <= t1) {
      report.events.push_back({u, upper_t, "upper", order, lifted, t0 < upper_t && upper_t < t1});
    }
  }
  std::sort(report.events.begin(), report.events.end(),
            [](const WallEvent& x, const WallEvent& y) { return x.t < y.t; });
  return report;
}

}  // namespace volcone::bundle
