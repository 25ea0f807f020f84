#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volcone/lattice.hpp"
#include "volcone/polynomial.hpp"

namespace volcone::bundle {

/// Volume function of the base B of a P^1-bundle P(O + A) -> B.
class BaseVolume {
 public:
  virtual ~BaseVolume() = default;

  virtual std::string name() const = 0;
  /// Complex dimension n of the base.
  virtual int dimension() const = 0;
  virtual std::size_t rank() const = 0;
  virtual DivisorClass make_class(RationalVector coords) const = 0;
  virtual Rational vol(const DivisorClass& d) const = 0;
  /// Big and nef with positive degree on every catalog curve.
  virtual bool is_ample(const DivisorClass& d) const = 0;
  /// Points in (u0, u1) where u -> Vol(e + u a) changes polynomial piece, or
  /// nullopt when the provider cannot say (adaptive quadrature is used then).
  virtual std::optional<std::vector<Rational>> breakpoints(const DivisorClass& e,
                                                           const DivisorClass& a,
                                                           const Rational& u0,
                                                           const Rational& u1) const = 0;
  virtual const SurfaceGeometry* geometry() const { return nullptr; }
};

/// The curve P^1: classes are degrees, Vol(m) = max(m, 0).
std::shared_ptr<const BaseVolume> curve_base();
std::shared_ptr<const BaseVolume> surface_base(SurfaceGeometry geometry);
/// "p1" selects the curve; anything else is resolved as a surface geometry.
std::shared_ptr<const BaseVolume> make_base(std::string_view source);

enum class Scheme { exact_piecewise, adaptive };

struct QuadratureResult {
  std::optional<Rational> exact;
  double value = 0.0;
  Scheme scheme = Scheme::exact_piecewise;
  double error_bound = 0.0;
  std::vector<Rational> subdivision;
};

/// Integral of Vol_B(e + u a) over [u0, u1]. Exact (Simpson on each
/// polynomial piece) when breakpoints are known, adaptive Simpson to `tol` otherwise.
QuadratureResult integrate_base_segment(const BaseVolume& base, const DivisorClass& e,
                                        const DivisorClass& a, const Rational& u0,
                                        const Rational& u1, double tol = 1e-9);

struct BundleModel {
  std::shared_ptr<const BaseVolume> base;
  DivisorClass ample;    // A
  DivisorClass divisor;  // D
  Rational kappa;
  bool calibrated = false;

  int dimension() const { return base->dimension(); }
};

struct CalibrationRow {
  DivisorClass e;
  Rational integral;
  Rational direct;
  std::optional<Rational> ratio;  // direct / integral; nullopt when both vanish
};

struct Calibration {
  Rational kappa;
  std::vector<CalibrationRow> rows;
};

/// Total-space volume Vol(xi + pi^* E) for B = P^1 and A of integer degree
/// a >= 1, from the sections polytope of the Hirzebruch surface F_a.
Rational direct_total_volume(const DivisorClass& a, const DivisorClass& e);

/// Degree-one..five probe classes used when the caller supplies none.
std::vector<DivisorClass> default_calibration_classes(const BaseVolume& base);

/// Fits kappa with kappa * int_0^1 Vol_B(E + sA) ds = Vol_X(xi + pi^*E) on every
/// test class. Throws Error if the ratio is not the same rational on all of
/// them, CapabilityError for bases without a total-space oracle.
Calibration calibrate(const BaseVolume& base, const DivisorClass& a,
                      std::span<const DivisorClass> test_classes);

/// Builds a model. Curve bases are calibrated; surface bases take
/// `kappa_override` or n + 1 and are marked uncalibrated.
BundleModel make_model(std::shared_ptr<const BaseVolume> base, DivisorClass a, DivisorClass d,
                       std::optional<Rational> kappa_override = std::nullopt);

/// kappa * int_0^1 Vol_B(E + sA) ds.
QuadratureResult wolfe_vol(const BundleModel& model, const DivisorClass& e);

/// Vol_X(alpha + t omega) = kappa * int_t^{1+2t} Vol_B(D + uA) du, t >= 0.
QuadratureResult segment_plus(const BundleModel& model, const Rational& t);
/// 2 kappa Vol_B(D + (1+2t)A) - kappa Vol_B(D + tA).
Rational segment_plus_derivative(const BundleModel& model, const Rational& t);

/// Vol_X(alpha - t omega) = kappa * int_0^{1-2t} Vol_B(D + uA) du, 0 <= t < 1/2.
/// Requires Vol_B(D) = 0.
QuadratureResult segment_minus(const BundleModel& model, const Rational& t);
/// -2 kappa Vol_B(D + (1-2t)A).
Rational segment_minus_derivative(const BundleModel& model, const Rational& t);

/// Direct Vol_X((1+t) xi + pi^*(D + tA)) on F_a; only for the curve base.
Rational direct_segment_volume(const BundleModel& model, const Rational& t);

struct TransferRow {
  Rational t;
  QuadratureResult value;
  Rational derivative;
  double second_derivative = 0.0;
};

/// Where a base wall u_w is met by one of the two moving endpoints of the
/// integration interval [t, 1 + 2t].
struct WallEvent {
  Rational base_u;
  Rational t;
  std::string endpoint;  // "lower" (u = t) or "upper" (u = 1 + 2t)
  /// Continuous derivatives of the base segment at u_w; nullopt means smooth.
  std::optional<int> base_order;
  /// The bundle segment gains one derivative.
  std::optional<int> bundle_order;
  bool interior = false;
};

struct TransferReport {
  std::vector<TransferRow> rows;
  std::vector<WallEvent> events;
  std::vector<Rational> base_walls;
};

TransferReport transfer_regularity_report(const BundleModel& model, const Rational& t0,
                                          const Rational& t1, std::size_t steps);

/// Base segment u -> Vol_B(D + uA) as exact polynomial pieces over [u0, u1].
struct BasePiece {
  Rational u_begin;
  Rational u_end;
  Polynomial poly;
};
std::vector<BasePiece> base_segment_pieces(const BaseVolume& base, const DivisorClass& d,
                                           const DivisorClass& a, const Rational& u0,
                                           const Rational& u1);

}  // namespace volcone::bundle
