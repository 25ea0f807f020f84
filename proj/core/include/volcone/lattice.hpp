#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volcone/linalg.hpp"
#include "volcone/rational.hpp"

namespace volcone {

/// A numerical divisor class: exact coordinates in the basis of one geometry.
class DivisorClass {
 public:
  DivisorClass() = default;
  DivisorClass(std::string geometry_id, RationalVector coords);

  const std::string& geometry_id() const noexcept { return geometry_id_; }
  const RationalVector& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const;

  DivisorClass& operator+=(const DivisorClass& other);
  DivisorClass& operator-=(const DivisorClass& other);
  DivisorClass& operator*=(const Rational& scale);

  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(const Rational& s, DivisorClass a) { return a *= s; }
  friend DivisorClass operator*(DivisorClass a, const Rational& s) { return a *= s; }
  DivisorClass operator-() const;

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

 private:
  void require_compatible(const DivisorClass& other) const;

  std::string geometry_id_;
  RationalVector coords_;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Picard lattice of a smooth projective surface together with the
/// curve data needed to decide nefness, pseudo-effectivity and Zariski
/// decompositions. Immutable once validated.
struct SurfaceGeometry {
  std::string name;
  std::vector<std::string> basis;
  IntMatrix intersection;
  /// Irreducible curves of negative self-intersection. Trusted input.
  std::vector<DivisorClass> negative_curves;
  /// Recorded assertion that every catalog curve is irreducible; never checked.
  bool curves_irreducible = true;
  /// Curve classes whose dual half-spaces, together with the catalog,
  /// cut out the nef cone.
  std::optional<std::vector<DivisorClass>> nef_duals;

  std::size_t rank() const noexcept { return basis.size(); }

  DivisorClass make_class(RationalVector coords) const;
  DivisorClass basis_class(std::size_t i) const;
  DivisorClass zero() const;

  /// Exact pairing D1^T Q D2. Throws GeometryMismatch on foreign classes.
  Rational intersect(const DivisorClass& a, const DivisorClass& b) const;
  Rational self_intersection(const DivisorClass& d) const { return intersect(d, d); }

  RationalMatrix form() const;

  /// Checks symmetry, signature (1, rank-1), catalog negativity and
  /// coordinate lengths. Throws SchemaError / SignatureError.
  void validate() const;

  void require_member(const DivisorClass& d) const;

  friend bool operator==(const SurfaceGeometry&, const SurfaceGeometry&) = default;
};

Rational intersect(const SurfaceGeometry& geometry, const DivisorClass& a,
                   const DivisorClass& b);

/// True iff the symmetric matrix has signature (1, rank-1).
/// Throws DomainError on non-symmetric or non-square input.
bool signature_check(const IntMatrix& q);

/// Builders: "p2", "bl1_p2", "bl2_p2", "p1xp1", "hirzebruch_<e>" for e >= 0.
SurfaceGeometry builtin_geometry(std::string_view name);

/// Representative builtin names (hirzebruch listed for e = 0..3).
std::vector<std::string> builtin_names();

}  // namespace volcone
