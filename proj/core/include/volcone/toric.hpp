#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "volcone/lattice.hpp"

namespace volcone::toric {

using Ray = std::array<std::int64_t, 2>;
using Point = std::array<Rational, 2>;

/// Complete smooth toric surface given by counterclockwise primitive rays.
/// `class_map` sends torus-invariant divisor coefficients to coordinates in
/// the matching SurfaceGeometry basis.
struct ToricSurface {
  std::string name;
  std::string geometry_name;
  std::vector<Ray> rays;
  /// rank x rays.size() integer matrix.
  IntMatrix class_map;
  /// rays.size() x rank integer matrix with class_map * inverse_map = identity.
  IntMatrix inverse_map;

  std::size_t ray_count() const noexcept { return rays.size(); }

  /// Image of ray coefficients in the geometry basis.
  RationalVector to_class_coords(const RationalVector& coeffs) const;
  /// A fixed right inverse of `to_class_coords`.
  RationalVector coefficients_for(const RationalVector& class_coords) const;

  void validate() const;
};

/// "p2", "p1xp1", "hirzebruch_<e>", "bl1_p2" (the F_1 fan in the (H, E) basis).
ToricSurface builtin_toric(std::string_view name);
std::vector<std::string> builtin_toric_names();

struct HalfPlane {
  Ray normal;
  Rational offset;  // constraint <u, normal> >= -offset
};

/// {u : <u, v_i> >= -a_i}. Vertices are counterclockwise; an empty polygon has none.
struct SectionsPolytope {
  std::vector<HalfPlane> halfplanes;
  std::vector<Point> vertices;

  bool empty() const noexcept { return vertices.empty(); }
  bool contains(const Point& p) const;
  Rational area() const;
};

SectionsPolytope sections_polytope(const ToricSurface& surface, const RationalVector& coeffs);

/// Lattice points of m * polytope, counted row by row with exact bounds.
std::uint64_t count_sections(const ToricSurface& surface, const RationalVector& coeffs,
                             std::int64_t m);

/// 2 * area of the sections polytope.
Rational volume_exact(const ToricSurface& surface, const RationalVector& coeffs);

struct EmpiricalVolume {
  double at_m = 0.0;        // 2 h0(m) / m^2
  double at_half_m = 0.0;   // same at m / 2
  double richardson = 0.0;  // 2 at_m - at_half_m
  std::int64_t m = 0;
};

EmpiricalVolume volume_empirical(const ToricSurface& surface, const RationalVector& coeffs,
                                 std::int64_t m_max);

}  // namespace volcone::toric
