#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volcone/lattice.hpp"
#include "volcone/sampling.hpp"

namespace volcone::probe {

struct Witness {
  std::string label;
  std::vector<RationalVector> points;
  double value = 0.0;
};

/// Outcome of a sampling probe. Reproducible from (seed, parameters).
struct ProbeReport {
  std::string kind;
  std::string geometry;
  std::string region;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string statistic_name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = true;
  std::vector<Witness> witnesses;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const ProbeReport& report);

struct ProbeOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

using ClassFunction = std::function<Rational(const DivisorClass&)>;

/// alpha -> omega . <alpha>, the positive product paired with omega.
ClassFunction positive_product_against(const SurfaceGeometry& geometry, const DivisorClass& omega);

/// Box in coordinates that contains a healthy portion of the big cone.
Box default_region(const SurfaceGeometry& geometry);

/// Min over sampled big pairs (x, y) and t in {1/4, 1/2, 3/4} of
/// fn^e(tx + (1-t)y) - t fn^e(x) - (1-t) fn^e(y). Positive means concave.
/// exponent must be 1/2 or 1 on surfaces. Passes at margin >= -1e-9.
ProbeReport concavity_check(const SurfaceGeometry& geometry, const ClassFunction& fn,
                            const std::string& fn_label, const Rational& exponent,
                            const Box& region, const ProbeOptions& options);

/// (A.B)^2 - (A.A)(B.B). Throws PreconditionError unless both are nef.
Rational kt_check(const SurfaceGeometry& geometry, const DivisorClass& a, const DivisorClass& b);

/// kt_check on random nef pairs plus proportional pairs (margin must be exactly 0).
ProbeReport kt_probe(const SurfaceGeometry& geometry, const Box& region,
                     const ProbeOptions& options);

/// Second central difference of vol in directions (dir1, dir2) at x with step h.
Rational hessian_entry(const SurfaceGeometry& geometry, const DivisorClass& x,
                       const DivisorClass& dir1, const DivisorClass& dir2, const Rational& step);

/// Hessian entries along a grid of big classes. Samples whose stencil
/// crosses a Zariski wall are flagged and excluded from the jump statistic;
/// a jump is reported between consecutive clean samples when the difference
/// exceeds 10x the within-chamber variation.
ProbeReport hessian_probe(const SurfaceGeometry& geometry, std::span<const DivisorClass> grid,
                          const DivisorClass& dir1, const DivisorClass& dir2,
                          const Rational& step);

/// Sup of |H_ij| over all basis pairs along the grid.
ProbeReport hessian_sup(const SurfaceGeometry& geometry, std::span<const DivisorClass> grid,
                        const Rational& step);

/// Max ||grad(x) - grad(y)||_1 / ||x - y||_1 over random pairs in a box
/// inside the big cone. Throws PreconditionError with the offending corner
/// if the box leaves the big cone.
ProbeReport lipschitz_gradient_estimate(const SurfaceGeometry& geometry, const Box& region,
                                        const ProbeOptions& options,
                                        std::optional<double> bound = std::nullopt);

struct OneSidedDerivative {
  RationalVector direction;
  Rational right;  // d/dt+ Vol(alpha + t d) at 0
  Rational left;   // d/dt- at 0
};

/// Exact one-sided derivatives of Vol(alpha + t d) at t = 0 from the chamber polynomials.
OneSidedDerivative one_sided_derivatives(const SurfaceGeometry& geometry,
                                         const DivisorClass& alpha,
                                         const DivisorClass& direction);

/// |Vol(alpha + h) - Vol(alpha)| / ||h||_1 over random h with ||h||_1 <= radius,
/// at a boundary class alpha (pseudo-effective with Vol = 0). Also tabulates
/// one-sided derivatives along `directions`.
ProbeReport boundary_lipschitz_probe(const SurfaceGeometry& geometry, const DivisorClass& alpha,
                                     std::span<const DivisorClass> directions,
                                     const Rational& radius, const ProbeOptions& options,
                                     std::optional<double> bound = std::nullopt);

}  // namespace volcone::probe
