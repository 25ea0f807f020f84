#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "volcone/lattice.hpp"
#include "volcone/polynomial.hpp"
#include "volcone/zariski.hpp"

namespace volcone {

/// P.P for big classes, zero otherwise (including outside the pseudo-effective cone).
Rational vol(const SurfaceGeometry& geometry, const DivisorClass& d);

/// Linear functional on classes, stored by its values on the basis.
struct Covector {
  std::string geometry_id;
  RationalVector coords;

  Rational operator()(const DivisorClass& beta) const;
};

/// beta -> 2 beta.P at a big class. Throws DomainError off the big cone.
Covector grad_vol(const SurfaceGeometry& geometry, const DivisorClass& d);

struct ProfileRow {
  Rational t;
  Rational volume;
  std::optional<Rational> derivative;  // only on the big sub-segment
  std::size_t chamber = 0;
};

/// t -> Vol(alpha + t beta) sampled on a sorted grid.
struct SegmentProfile {
  DivisorClass alpha;
  DivisorClass beta;
  std::vector<ProfileRow> rows;
};

SegmentProfile segment_profile(const SurfaceGeometry& geometry, const DivisorClass& alpha,
                               const DivisorClass& beta, std::span<const Rational> t_grid);

/// One interval of constant Zariski support along a segment.
struct Chamber {
  Rational t_begin;
  Rational t_end;
  ConeRegion region = ConeRegion::big;
  std::vector<std::size_t> support;
  /// Exact fit of Vol through interior samples (cubic interpolant).
  Polynomial fitted;
  /// P(t).P(t) from the affine positive part; must equal `fitted`.
  Polynomial analytic;
  /// Max |fitted - vol| over independent verification points; zero when exact.
  Rational residual;
};

struct WallMatch {
  Rational t;
  bool value_match = false;
  bool derivative_match = false;
  /// Both neighbouring chambers are big.
  bool interior_to_big_cone = false;
  Rational second_derivative_jump;
};

struct ChamberReport {
  Rational t_begin;
  Rational t_end;
  std::vector<Rational> walls;
  std::vector<Chamber> chambers;
  std::vector<WallMatch> matches;

  /// Index of the chamber containing t; points on a wall go to the right-hand chamber.
  std::size_t chamber_of(const Rational& t) const;
};

/// Exact chamber decomposition of t -> Vol(alpha + t beta) on [t0, t1].
/// Throws DomainError for beta = 0 or t1 <= t0.
ChamberReport chamber_scan(const SurfaceGeometry& geometry, const DivisorClass& alpha,
                           const DivisorClass& beta, const Rational& t0, const Rational& t1);

}  // namespace volcone
