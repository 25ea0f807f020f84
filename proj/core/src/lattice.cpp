#include "volcone/lattice.hpp"

#include <charconv>
#include <string>

#include "volcone/error.hpp"

namespace volcone {

DivisorClass::DivisorClass(std::string geometry_id, RationalVector coords)
    : geometry_id_(std::move(geometry_id)), coords_(std::move(coords)) {}

bool DivisorClass::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

void DivisorClass::require_compatible(const DivisorClass& other) const {
  if (geometry_id_ != other.geometry_id_ || coords_.size() != other.coords_.size()) {
    throw GeometryMismatch("classes from geometries '" + geometry_id_ + "' and '" +
                           other.geometry_id_ + "' cannot be combined");
  }
}

DivisorClass& DivisorClass::operator+=(const DivisorClass& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

DivisorClass& DivisorClass::operator-=(const DivisorClass& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

DivisorClass& DivisorClass::operator*=(const Rational& scale) {
  for (auto& c : coords_) c *= scale;
  return *this;
}

DivisorClass DivisorClass::operator-() const {
  DivisorClass out = *this;
  for (auto& c : out.coords_) c = -c;
  return out;
}

DivisorClass SurfaceGeometry::make_class(RationalVector coords) const {
  if (coords.size() != rank()) {
    throw GeometryMismatch("class has " + std::to_string(coords.size()) +
                           " coordinates but geometry '" + name + "' has rank " +
                           std::to_string(rank()));
  }
  return DivisorClass(name, std::move(coords));
}

DivisorClass SurfaceGeometry::basis_class(std::size_t i) const {
  RationalVector coords(rank(), Rational(0));
  coords.at(i) = 1;
  return DivisorClass(name, std::move(coords));
}

DivisorClass SurfaceGeometry::zero() const {
  return DivisorClass(name, RationalVector(rank(), Rational(0)));
}

void SurfaceGeometry::require_member(const DivisorClass& d) const {
  if (d.geometry_id() != name || d.size() != rank()) {
    throw GeometryMismatch("class from '" + d.geometry_id() + "' used with geometry '" + name +
                           "'");
  }
}

Rational SurfaceGeometry::intersect(const DivisorClass& a, const DivisorClass& b) const {
  require_member(a);
  require_member(b);
  Rational acc = 0;
  const std::size_t n = rank();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (intersection[i][j] != 0 && b[j] != 0) row += Rational(intersection[i][j]) * b[j];
    }
    acc += a[i] * row;
  }
  return acc;
}

RationalMatrix SurfaceGeometry::form() const {
  RationalMatrix q(rank(), rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    for (std::size_t j = 0; j < rank(); ++j) q(i, j) = Rational(intersection[i][j]);
  }
  return q;
}

void SurfaceGeometry::validate() const {
  if (name.empty()) throw SchemaError("geometry name must not be empty");
  if (rank() == 0) throw SchemaError("geometry '" + name + "' has an empty basis");
  if (intersection.size() != rank()) {
    throw SchemaError("intersection matrix of '" + name + "' must have " +
                      std::to_string(rank()) + " rows");
  }
  for (const auto& row : intersection) {
    if (row.size() != rank()) {
      throw SchemaError("intersection matrix of '" + name + "' must be square");
    }
  }
  for (std::size_t i = 0; i < rank(); ++i) {
    for (std::size_t j = i + 1; j < rank(); ++j) {
      if (intersection[i][j] != intersection[j][i]) {
        throw SchemaError("intersection matrix of '" + name + "' is not symmetric");
      }
    }
  }
  if (!signature_check(intersection)) {
    throw SignatureError("intersection form of '" + name +
                         "' does not have signature (1, rank-1)");
  }
  for (std::size_t k = 0; k < negative_curves.size(); ++k) {
    const auto& c = negative_curves[k];
    require_member(c);
    Rational sq = self_intersection(c);
    if (sq >= 0) {
      throw SchemaError("negative curve #" + std::to_string(k) + " of '" + name +
                        "' has self-intersection " + to_string(sq) + " >= 0");
    }
  }
  if (nef_duals) {
    for (const auto& l : *nef_duals) require_member(l);
  }
}

Rational intersect(const SurfaceGeometry& geometry, const DivisorClass& a, const DivisorClass& b) {
  return geometry.intersect(a, b);
}

bool signature_check(const IntMatrix& q) {
  const std::size_t n = q.size();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i].size() != n) throw DomainError("signature_check requires a square matrix");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Rational(q[i][j]);
  }
  if (!m.is_symmetric()) throw DomainError("signature_check requires a symmetric matrix");
  Inertia in = inertia(m);
  return in.positive == 1 && in.negative == n - 1 && in.zero == 0;
}

namespace {

DivisorClass cls(const SurfaceGeometry& g, std::initializer_list<long> coords) {
  RationalVector v;
  for (long c : coords) v.emplace_back(c);
  return g.make_class(std::move(v));
}

SurfaceGeometry make_p2() {
  SurfaceGeometry g;
  g.name = "p2";
  g.basis = {"H"};
  g.intersection = {{1}};
  g.nef_duals = std::vector<DivisorClass>{cls(g, {1})};
  return g;
}

SurfaceGeometry make_bl1() {
  SurfaceGeometry g;
  g.name = "bl1_p2";
  g.basis = {"H", "E"};
  g.intersection = {{1, 0}, {0, -1}};
  g.negative_curves = {cls(g, {0, 1})};
  g.nef_duals = std::vector<DivisorClass>{cls(g, {1, 0}), cls(g, {1, -1})};
  return g;
}

SurfaceGeometry make_bl2() {
  SurfaceGeometry g;
  g.name = "bl2_p2";
  g.basis = {"H", "E1", "E2"};
  g.intersection = {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  g.negative_curves = {cls(g, {0, 1, 0}), cls(g, {0, 0, 1}), cls(g, {1, -1, -1})};
  // The Mori cone is spanned by the three (-1)-curves.
  g.nef_duals = g.negative_curves;
  return g;
}

SurfaceGeometry make_p1xp1() {
  SurfaceGeometry g;
  g.name = "p1xp1";
  g.basis = {"F1", "F2"};
  g.intersection = {{0, 1}, {1, 0}};
  g.nef_duals = std::vector<DivisorClass>{cls(g, {1, 0}), cls(g, {0, 1})};
  return g;
}

SurfaceGeometry make_hirzebruch(long e) {
  SurfaceGeometry g;
  g.name = "hirzebruch_" + std::to_string(e);
  g.basis = {"C0", "f"};
  g.intersection = {{-e, 1}, {1, 0}};
  if (e >= 1) g.negative_curves = {cls(g, {1, 0})};
  g.nef_duals = std::vector<DivisorClass>{cls(g, {0, 1}), cls(g, {1, e})};
  return g;
}

}  // namespace

SurfaceGeometry builtin_geometry(std::string_view name) {
  SurfaceGeometry g;
  if (name == "p2") {
    g = make_p2();
  } else if (name == "bl1_p2") {
    g = make_bl1();
  } else if (name == "bl2_p2") {
    g = make_bl2();
  } else if (name == "p1xp1") {
    g = make_p1xp1();
  } else if (name.starts_with("hirzebruch_")) {
    std::string_view digits = name.substr(std::string_view("hirzebruch_").size());
    long e = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || e < 0 ||
        e > 1000) {
      throw DomainError("unknown builtin geometry '" + std::string(name) + "'");
    }
    g = make_hirzebruch(e);
  } else {
    throw DomainError("unknown builtin geometry '" + std::string(name) + "'");
  }
  g.validate();
  return g;
}

std::vector<std::string> builtin_names() {
  return {"p2", "bl1_p2", "bl2_p2", "p1xp1", "hirzebruch_0", "hirzebruch_1", "hirzebruch_2",
          "hirzebruch_3"};
}

}  // namespace volcone
