#include "volcone/zariski.hpp"

#include <algorithm>
#include <string>

#include "volcone/error.hpp"

namespace volcone {

namespace {

int lex_sign(const Rational& value, const Rational& slope) {
  if (value != 0) return sgn(value);
  return sgn(slope);
}

int lex_sign(const Rational& a, const Rational& b, const Rational& c) {
  if (a != 0) return sgn(a);
  if (b != 0) return sgn(b);
  return sgn(c);
}

struct CoreResult {
  bool pseff = false;
  std::string reason;
  ConeRegion region = ConeRegion::not_pseff;
  std::vector<std::size_t> in_system;  // curves used in the final linear solve
  RationalVector coeff_value;
  RationalVector coeff_slope;
  DivisorClass p_value;
  DivisorClass p_slope;
};

// Zariski decomposition of base + eps * direction over Q(eps), eps > 0
// infinitesimal. With a zero direction this is the ordinary decomposition.
CoreResult zariski_core(const SurfaceGeometry& g, const DivisorClass& base,
                        const DivisorClass& direction) {
  g.require_member(base);
  g.require_member(direction);
  if (!g.nef_duals) {
    throw CapabilityError("geometry '" + g.name +
                          "' has no nef_duals; pseudo-effectivity cannot be decided");
  }
  const auto& curves = g.negative_curves;
  const std::size_t k = curves.size();

  std::vector<Rational> base_dot(k), dir_dot(k);
  for (std::size_t i = 0; i < k; ++i) {
    base_dot[i] = g.intersect(base, curves[i]);
    dir_dot[i] = g.intersect(direction, curves[i]);
  }

  std::vector<bool> in(k, false);
  for (std::size_t i = 0; i < k; ++i) in[i] = lex_sign(base_dot[i], dir_dot[i]) < 0;

  CoreResult r;
  while (true) {
    r.in_system.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (in[i]) r.in_system.push_back(i);
    }
    const std::size_t s = r.in_system.size();
    r.p_value = base;
    r.p_slope = direction;
    r.coeff_value.assign(s, Rational(0));
    r.coeff_slope.assign(s, Rational(0));
    if (s > 0) {
      RationalMatrix gram(s, s);
      RationalVector rhs_value(s), rhs_slope(s);
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
          gram(a, b) = g.intersect(curves[r.in_system[a]], curves[r.in_system[b]]);
        }
        rhs_value[a] = base_dot[r.in_system[a]];
        rhs_slope[a] = dir_dot[r.in_system[a]];
      }
      if (!is_negative_definite(gram)) {
        // For a pseudo-effective class the running support always sits inside
        // the true negative part, whose Gram matrix is negative definite.
        r.reason = "support Gram matrix is not negative definite";
        return r;
      }
      r.coeff_value = *solve(gram, rhs_value);
      r.coeff_slope = *solve(gram, rhs_slope);
      for (std::size_t a = 0; a < s; ++a) {
        r.p_value -= r.coeff_value[a] * curves[r.in_system[a]];
        r.p_slope -= r.coeff_slope[a] * curves[r.in_system[a]];
      }
    }
    bool grew = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (in[i]) continue;
      if (lex_sign(g.intersect(r.p_value, curves[i]), g.intersect(r.p_slope, curves[i])) < 0) {
        in[i] = true;
        grew = true;
      }
    }
    if (!grew) break;
  }

  for (std::size_t a = 0; a < r.in_system.size(); ++a) {
    if (lex_sign(r.coeff_value[a], r.coeff_slope[a]) < 0) {
      r.reason = "negative coefficient on catalog curve #" + std::to_string(r.in_system[a]);
      return r;
    }
  }
  for (std::size_t j = 0; j < g.nef_duals->size(); ++j) {
    const auto& l = (*g.nef_duals)[j];
    if (lex_sign(g.intersect(r.p_value, l), g.intersect(r.p_slope, l)) < 0) {
      r.reason = "positive part fails nef dual test #" + std::to_string(j);
      return r;
    }
  }
  const Rational pp = g.intersect(r.p_value, r.p_value);
  const Rational ps = g.intersect(r.p_value, r.p_slope);
  const Rational ss = g.intersect(r.p_slope, r.p_slope);
  const int square = lex_sign(pp, ps, ss);
  if (square < 0) {
    r.reason = "positive part has negative self-intersection";
    return r;
  }
  r.pseff = true;
  r.region = square > 0 ? ConeRegion::big : ConeRegion::boundary;
  return r;
}

}  // namespace

int AffineValue::sign() const { return lex_sign(value, slope); }

DivisorClass ZariskiDecomposition::negative(const SurfaceGeometry& geometry) const {
  DivisorClass n = geometry.zero();
  for (const auto& [index, coeff] : negative_coeffs) n += coeff * geometry.negative_curves[index];
  return n;
}

std::optional<ZariskiDecomposition> try_zariski_decompose(const SurfaceGeometry& geometry,
                                                          const DivisorClass& d) {
  CoreResult r = zariski_core(geometry, d, geometry.zero());
  if (!r.pseff) return std::nullopt;
  ZariskiDecomposition z;
  z.input = d;
  z.positive = r.p_value;
  for (std::size_t a = 0; a < r.in_system.size(); ++a) {
    if (r.coeff_value[a] > 0) {
      z.negative_coeffs.emplace(r.in_system[a], r.coeff_value[a]);
      z.support.push_back(r.in_system[a]);
    }
  }
  return z;
}

ZariskiDecomposition zariski_decompose(const SurfaceGeometry& geometry, const DivisorClass& d) {
  CoreResult r = zariski_core(geometry, d, geometry.zero());
  if (!r.pseff) {
    throw NotPseudoEffective("class " + to_string(d.coords()) +
                             " is not pseudo-effective relative to the catalog of '" +
                             geometry.name + "' (" + r.reason + ")");
  }
  return *try_zariski_decompose(geometry, d);
}

bool is_nef(const SurfaceGeometry& geometry, const DivisorClass& d) {
  geometry.require_member(d);
  if (!geometry.nef_duals) {
    throw CapabilityError("geometry '" + geometry.name + "' has no nef_duals; is_nef unavailable");
  }
  for (const auto& c : geometry.negative_curves) {
    if (geometry.intersect(d, c) < 0) return false;
  }
  for (const auto& l : *geometry.nef_duals) {
    if (geometry.intersect(d, l) < 0) return false;
  }
  return true;
}

bool is_pseff(const SurfaceGeometry& geometry, const DivisorClass& d) {
  return zariski_core(geometry, d, geometry.zero()).pseff;
}

bool is_big(const SurfaceGeometry& geometry, const DivisorClass& d) {
  return zariski_core(geometry, d, geometry.zero()).region == ConeRegion::big;
}

ZariskiGerm zariski_germ(const SurfaceGeometry& geometry, const DivisorClass& base,
                         const DivisorClass& direction) {
  CoreResult r = zariski_core(geometry, base, direction);
  ZariskiGerm germ;
  germ.region = r.pseff ? r.region : ConeRegion::not_pseff;
  germ.positive_value = r.p_value;
  germ.positive_slope = r.p_slope;
  if (!r.pseff) return germ;
  for (std::size_t a = 0; a < r.in_system.size(); ++a) {
    AffineValue coeff{r.coeff_value[a], r.coeff_slope[a]};
    if (coeff.sign() > 0) {
      germ.support.push_back(r.in_system[a]);
      germ.coeffs.emplace(r.in_system[a], coeff);
    }
  }
  return germ;
}

}  // namespace volcone
