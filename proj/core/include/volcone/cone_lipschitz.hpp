#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volcone/lattice.hpp"
#include "volcone/sampling.hpp"

namespace volcone::cone {

using Predicate = std::function<bool(const RationalVector&)>;

/// A nonnegative function on an open convex cone in Q^dimension.
struct ConeFunction {
  std::string label;
  std::size_t dimension = 0;
  Rational degree;
  /// Exact membership in the open cone.
  Predicate member;
  /// Exact membership in its closure.
  Predicate closure_member;
  std::function<double(const RationalVector&)> evaluate;
  /// Set when `evaluate` must not be called concurrently.
  bool serial = false;
};

/// x^a y^b on the open positive quadrant; degree a + b.
ConeFunction monomial(const Rational& a, const Rational& b);
/// <w, x> on the open positive orthant; w must be nonnegative (dual cone).
ConeFunction linear_form(const RationalVector& weights);
/// x - y on the open quadrant: homogeneous of degree 1 but decreasing in y.
ConeFunction difference_form();
/// Vol on the big cone of a surface, degree 2.
ConeFunction volume_function(const SurfaceGeometry& geometry);

/// Sum of absolute coefficients of v in the given basis. Throws DomainError
/// if the basis is singular or of the wrong size.
Rational basis_norm(const RationalVector& v, std::span<const RationalVector> basis);

struct AxiomFailure {
  char axiom = 'a';
  std::vector<RationalVector> witness;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomReport {
  bool homogeneous = true;
  bool monotone = true;
  bool bounded = true;
  double sup_sampled = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<AxiomFailure> failures;

  bool passed() const { return homogeneous && monotone && bounded; }
};

/// Spot-checks homogeneity (a), monotonicity along the cone (b) and local
/// boundedness (c) with relative slack 1e-9. Failures are reported, not thrown.
AxiomReport verify_axioms(const ConeFunction& f, const Box& region, std::size_t samples,
                          std::uint64_t seed, unsigned threads = 1);

struct LipschitzCertificate {
  RationalVector center;
  Rational radius;
  std::vector<RationalVector> basis;
  double sup_u = 0.0;
  bool sup_from_hint = false;
  double safety = 1.05;
  /// (2^d / radius) * sup_u * safety
  double constant = 0.0;
  /// Valid on the basis-norm ball of radius radius / 4 about center.
  Rational valid_radius;
};

/// Certificate for the locally Lipschitz property. Containment of the
/// basis-norm balls about center and center/2 is decided exactly at the
/// ball vertices (sufficient by convexity) and spot-checked on the boundary.
/// Throws PreconditionError naming the violating point when radius is too large.
LipschitzCertificate lipschitz_certificate(const ConeFunction& f, const RationalVector& center,
                                           const Rational& radius,
                                           std::span<const RationalVector> basis,
                                           std::optional<double> sup_hint = std::nullopt,
                                           std::size_t sup_samples = 4000,
                                           std::uint64_t seed = 0);

struct EmpiricalLipschitz {
  double max_quotient = 0.0;
  std::size_t pairs = 0;
  std::size_t skipped = 0;
  std::vector<RationalVector> witness;
};

/// Max |f(a1) - f(a2)| / ||a1 - a2|| over pairs drawn from the validity ball.
EmpiricalLipschitz empirical_lipschitz(const ConeFunction& f, const LipschitzCertificate& cert,
                                       std::size_t pairs, std::uint64_t seed,
                                       unsigned threads = 1);

struct ChainReport {
  std::size_t samples = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  /// Smallest relative slack seen across all four inequalities.
  double worst_margin = 0.0;
  std::vector<RationalVector> witness;

  bool passed() const { return lower_violations == 0 && upper_violations == 0; }
};

/// For alpha in the radius ball and h in the cone with ||h|| < radius:
///   f(a) >= f(a - h) >= (1 - d||h||/r) f(a)  and
///   f(a) <= f(a + h) <= (1 + 2^d||h||/r) f(a),
/// each with 1e-9 relative slack. Cone directions h are drawn from `cone_box`.
ChainReport chain_check(const ConeFunction& f, const LipschitzCertificate& cert,
                        const Box& cone_box, std::size_t samples, std::uint64_t seed);

/// A point of the basis-norm ball: center + sum c_i e_i with sum |c_i| <= radius.
RationalVector ball_point(Sampler& sampler, const RationalVector& center, const Rational& radius,
                          std::span<const RationalVector> basis);

}  // namespace volcone::cone
