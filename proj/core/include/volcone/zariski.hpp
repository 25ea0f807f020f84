#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "volcone/lattice.hpp"

namespace volcone {

/// D = P + sum a_i C_i with P nef, a_i >= 0, P.C_i = 0 on the support and a
/// negative definite support Gram matrix.
struct ZariskiDecomposition {
  DivisorClass input;
  DivisorClass positive;
  /// Catalog index -> coefficient, for every curve in the support.
  std::map<std::size_t, Rational> negative_coeffs;
  std::vector<std::size_t> support;

  DivisorClass negative(const SurfaceGeometry& geometry) const;
};

/// Iterative support enlargement. Throws NotPseudoEffective when the class
/// is outside the pseudo-effective cone spanned by the catalog and
/// CapabilityError when the geometry has no nef duals.
ZariskiDecomposition zariski_decompose(const SurfaceGeometry& geometry, const DivisorClass& d);
std::optional<ZariskiDecomposition> try_zariski_decompose(const SurfaceGeometry& geometry,
                                                          const DivisorClass& d);

bool is_nef(const SurfaceGeometry& geometry, const DivisorClass& d);
bool is_big(const SurfaceGeometry& geometry, const DivisorClass& d);
bool is_pseff(const SurfaceGeometry& geometry, const DivisorClass& d);

enum class ConeRegion { not_pseff, boundary, big };

/// Value-plus-slope pair v + s*eps, compared lexicographically.
struct AffineValue {
  Rational value;
  Rational slope;

  Rational at(const Rational& dt) const { return value + slope * dt; }
  int sign() const;
};

/// Zariski decomposition of base + eps*direction for infinitesimal eps > 0.
/// On a chamber starting at `base` the positive part and the coefficients are
/// affine in the segment parameter; the germ carries those affine pieces.
struct ZariskiGerm {
  ConeRegion region = ConeRegion::not_pseff;
  std::vector<std::size_t> support;
  std::map<std::size_t, AffineValue> coeffs;
  DivisorClass positive_value;
  DivisorClass positive_slope;
};

ZariskiGerm zariski_germ(const SurfaceGeometry& geometry, const DivisorClass& base,
                         const DivisorClass& direction);

}  // namespace volcone
