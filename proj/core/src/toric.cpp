#include "volcone/toric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "volcone/error.hpp"

namespace volcone::toric {

namespace {

mpz_class floor_q(const Rational& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

mpz_class ceil_q(const Rational& q) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

std::int64_t det(const Ray& a, const Ray& b) { return a[0] * b[1] - a[1] * b[0]; }

// Upper half (y > 0, or y == 0 and x > 0) sorts before the lower half.
bool upper(const Point& p) { return p[1] > 0 || (p[1] == 0 && p[0] > 0); }

}  // namespace

RationalVector ToricSurface::to_class_coords(const RationalVector& coeffs) const {
  if (coeffs.size() != rays.size()) {
    throw DomainError("expected " + std::to_string(rays.size()) + " ray coefficients, got " +
                      std::to_string(coeffs.size()));
  }
  RationalVector out(class_map.size(), Rational(0));
  for (std::size_t r = 0; r < class_map.size(); ++r) {
    for (std::size_t c = 0; c < rays.size(); ++c) out[r] += Rational(class_map[r][c]) * coeffs[c];
  }
  return out;
}

RationalVector ToricSurface::coefficients_for(const RationalVector& class_coords) const {
  if (class_coords.size() != class_map.size()) {
    throw DomainError("class has the wrong rank for toric model '" + name + "'");
  }
  RationalVector out(rays.size(), Rational(0));
  for (std::size_t r = 0; r < rays.size(); ++r) {
    for (std::size_t c = 0; c < class_coords.size(); ++c) {
      out[r] += Rational(inverse_map[r][c]) * class_coords[c];
    }
  }
  return out;
}

void ToricSurface::validate() const {
  if (rays.size() < 3) throw DomainError("a complete fan needs at least three rays");
  double winding = 0.0;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const Ray& a = rays[i];
    const Ray& b = rays[(i + 1) % rays.size()];
    if (std::gcd(a[0], a[1]) != 1) throw DomainError("ray is not primitive");
    if (det(a, b) <= 0) throw DomainError("rays are not in counterclockwise order");
    double turn = std::atan2(static_cast<double>(det(a, b)),
                             static_cast<double>(a[0] * b[0] + a[1] * b[1]));
    winding += turn;
  }
  if (std::abs(winding - 2.0 * std::numbers::pi) > 1e-9) {
    throw DomainError("fan of '" + name + "' does not wrap exactly once");
  }
  const std::size_t rank = class_map.size();
  for (std::size_t r = 0; r < rank; ++r) {
    for (std::size_t c = 0; c < rank; ++c) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < rays.size(); ++k) acc += class_map[r][k] * inverse_map[k][c];
      if (acc != (r == c ? 1 : 0)) throw DomainError("inverse_map is not a right inverse");
    }
  }
}

ToricSurface builtin_toric(std::string_view name) {
  ToricSurface t;
  t.name = std::string(name);
  if (name == "p2") {
    t.geometry_name = "p2";
    t.rays = {{1, 0}, {0, 1}, {-1, -1}};
    t.class_map = {{1, 1, 1}};
    t.inverse_map = {{1}, {0}, {0}};
  } else if (name == "p1xp1") {
    t.geometry_name = "p1xp1";
    t.rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    t.class_map = {{1, 0, 1, 0}, {0, 1, 0, 1}};
    t.inverse_map = {{1, 0}, {0, 1}, {0, 0}, {0, 0}};
  } else if (name == "bl1_p2") {
    // The F_1 fan with H = C0 + f and E = C0.
    t.geometry_name = "bl1_p2";
    t.rays = {{1, 0}, {0, 1}, {-1, 1}, {0, -1}};
    t.class_map = {{1, 0, 1, 1}, {-1, 1, -1, 0}};
    t.inverse_map = {{1, 0}, {1, 1}, {0, 0}, {0, 0}};
  } else if (name.starts_with("hirzebruch_")) {
    std::string_view digits = name.substr(std::string_view("hirzebruch_").size());
    std::int64_t e = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), e);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || e < 0 ||
        e > 1000) {
      throw DomainError("unknown toric model '" + std::string(name) + "'");
    }
    // D2 = C0 (self-intersection -e), D1 ~ D3 = f, D4 = C0 + e f.
    t.geometry_name = std::string(name);
    t.rays = {{1, 0}, {0, 1}, {-1, e}, {0, -1}};
    t.class_map = {{0, 1, 0, 1}, {1, 0, 1, e}};
    t.inverse_map = {{0, 1}, {1, 0}, {0, 0}, {0, 0}};
  } else {
    throw DomainError("unknown toric model '" + std::string(name) + "'");
  }
  t.validate();
  return t;
}

std::vector<std::string> builtin_toric_names() {
  return {"p2", "p1xp1", "hirzebruch_0", "hirzebruch_1", "hirzebruch_2", "hirzebruch_3",
          "bl1_p2"};
}

bool SectionsPolytope::contains(const Point& p) const {
  for (const auto& h : halfplanes) {
    if (Rational(h.normal[0]) * p[0] + Rational(h.normal[1]) * p[1] < -h.offset) return false;
  }
  return true;
}

Rational SectionsPolytope::area() const {
  if (vertices.size() < 3) return 0;
  Rational twice = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % vertices.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return twice / 2;
}

SectionsPolytope sections_polytope(const ToricSurface& surface, const RationalVector& coeffs) {
  if (coeffs.size() != surface.ray_count()) {
    throw DomainError("expected " + std::to_string(surface.ray_count()) +
                      " ray coefficients, got " + std::to_string(coeffs.size()));
  }
  SectionsPolytope poly;
  for (std::size_t i = 0; i < surface.ray_count(); ++i) {
    poly.halfplanes.push_back({surface.rays[i], coeffs[i]});
  }

  std::vector<Point> candidates;
  const std::size_t n = surface.ray_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Ray& vi = surface.rays[i];
      const Ray& vj = surface.rays[j];
      const std::int64_t d = det(vi, vj);
      if (d == 0) continue;
      const Rational& ai = coeffs[i];
      const Rational& aj = coeffs[j];
      Point p{(-ai * vj[1] + aj * vi[1]) / d, (-aj * vi[0] + ai * vj[0]) / d};
      if (!poly.contains(p)) continue;
      if (std::find(candidates.begin(), candidates.end(), p) == candidates.end()) {
        candidates.push_back(std::move(p));
      }
    }
  }
  if (candidates.size() >= 3) {
    Point centre{0, 0};
    for (const auto& p : candidates) {
      centre[0] += p[0];
      centre[1] += p[1];
    }
    centre[0] /= static_cast<long>(candidates.size());
    centre[1] /= static_cast<long>(candidates.size());
    std::sort(candidates.begin(), candidates.end(), [&](const Point& a, const Point& b) {
      Point da{a[0] - centre[0], a[1] - centre[1]};
      Point db{b[0] - centre[0], b[1] - centre[1]};
      bool ua = upper(da), ub = upper(db);
      if (ua != ub) return ua;
      return da[0] * db[1] - da[1] * db[0] > 0;
    });
  }
  poly.vertices = std::move(candidates);
  return poly;
}

std::uint64_t count_sections(const ToricSurface& surface, const RationalVector& coeffs,
                             std::int64_t m) {
  if (m < 1) throw DomainError("count_sections requires m >= 1");
  SectionsPolytope poly = sections_polytope(surface, coeffs);
  if (poly.empty()) return 0;
  const Rational scale(m);
  Rational ymin = poly.vertices.front()[1], ymax = ymin;
  for (const auto& v : poly.vertices) {
    ymin = std::min(ymin, v[1]);
    ymax = std::max(ymax, v[1]);
  }
  const mpz_class y_lo = ceil_q(ymin * scale);
  const mpz_class y_hi = floor_q(ymax * scale);

  std::uint64_t total = 0;
  for (mpz_class y = y_lo; y <= y_hi; ++y) {
    const Rational yq(y);
    bool bounded_lo = false, bounded_hi = false, feasible = true;
    Rational x_lo, x_hi;
    for (const auto& h : poly.halfplanes) {
      // nx * x >= -m a - ny * y
      const Rational rhs = -scale * h.offset - Rational(h.normal[1]) * yq;
      if (h.normal[0] == 0) {
        if (rhs > 0) feasible = false;
        continue;
      }
      const Rational bound = rhs / h.normal[0];
      if (h.normal[0] > 0) {
        if (!bounded_lo || bound > x_lo) x_lo = bound;
        bounded_lo = true;
      } else {
        if (!bounded_hi || bound < x_hi) x_hi = bound;
        bounded_hi = true;
      }
    }
    if (!feasible || !bounded_lo || !bounded_hi) continue;
    const mpz_class lo = ceil_q(x_lo);
    const mpz_class hi = floor_q(x_hi);
    if (hi >= lo) total += mpz_class(hi - lo + 1).get_ui();
  }
  return total;
}

Rational volume_exact(const ToricSurface& surface, const RationalVector& coeffs) {
  return 2 * sections_polytope(surface, coeffs).area();
}

EmpiricalVolume volume_empirical(const ToricSurface& surface, const RationalVector& coeffs,
                                 std::int64_t m_max) {
  if (m_max < 2) throw DomainError("volume_empirical requires m_max >= 2");
  EmpiricalVolume out;
  out.m = m_max;
  const std::int64_t half = m_max / 2;
  const double m = static_cast<double>(m_max);
  const double h = static_cast<double>(half);
  out.at_m = 2.0 * static_cast<double>(count_sections(surface, coeffs, m_max)) / (m * m);
  out.at_half_m = 2.0 * static_cast<double>(count_sections(surface, coeffs, half)) / (h * h);
  // Error is c/m to leading order; with m and m/2 this removes it.
  out.richardson = (m * out.at_m - h * out.at_half_m) / (m - h);
  return out;
}

}  // namespace volcone::toric
