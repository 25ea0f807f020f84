#include "volcone/volume.hpp"

#include <algorithm>

#include "volcone/error.hpp"

namespace volcone {

Rational vol(const SurfaceGeometry& geometry, const DivisorClass& d) {
  auto z = try_zariski_decompose(geometry, d);
  if (!z) return 0;
  Rational pp = geometry.self_intersection(z->positive);
  return pp > 0 ? pp : Rational(0);
}

Rational Covector::operator()(const DivisorClass& beta) const {
  if (beta.geometry_id() != geometry_id || beta.size() != coords.size()) {
    throw GeometryMismatch("covector of '" + geometry_id + "' applied to a class of '" +
                           beta.geometry_id() + "'");
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) acc += coords[i] * beta[i];
  return acc;
}

Covector grad_vol(const SurfaceGeometry& geometry, const DivisorClass& d) {
  auto z = try_zariski_decompose(geometry, d);
  if (!z || geometry.self_intersection(z->positive) <= 0) {
    throw DomainError("gradient of Vol is only defined on the big cone; " +
                      to_string(d.coords()) + " is not big");
  }
  Covector g{geometry.name, RationalVector(geometry.rank())};
  for (std::size_t j = 0; j < geometry.rank(); ++j) {
    g.coords[j] = 2 * geometry.intersect(geometry.basis_class(j), z->positive);
  }
  return g;
}

namespace {

// Positive part along one chamber: P(t) = value + (t - anchor) * slope.
struct Piece {
  Rational begin;
  Rational end;
  ConeRegion region = ConeRegion::not_pseff;
  std::vector<std::size_t> support;
  DivisorClass p_value;
  DivisorClass p_slope;
  Rational anchor;
};

void consider_root(const Rational& value, const Rational& slope, std::optional<Rational>& best) {
  if (slope >= 0) return;
  Rational dt = -value / slope;
  if (dt <= 0) return;
  if (!best || dt < *best) best = dt;
}

// Distance to the next wall along `direction`, or nullopt if the chamber is unbounded.
std::optional<Rational> next_wall(const SurfaceGeometry& g, const ZariskiGerm& germ,
                                  const DivisorClass& direction) {
  (void)direction;
  std::optional<Rational> best;
  for (const auto& [index, coeff] : germ.coeffs) consider_root(coeff.value, coeff.slope, best);
  for (std::size_t i = 0; i < g.negative_curves.size(); ++i) {
    if (germ.coeffs.contains(i)) continue;
    const auto& c = g.negative_curves[i];
    consider_root(g.intersect(germ.positive_value, c), g.intersect(germ.positive_slope, c), best);
  }
  for (const auto& l : *g.nef_duals) {
    consider_root(g.intersect(germ.positive_value, l), g.intersect(germ.positive_slope, l), best);
  }
  if (germ.region == ConeRegion::big) {
    // q(dt) = a + 2 b dt + c dt^2; a transversal rational zero ends the big chamber.
    const Rational a = g.self_intersection(germ.positive_value);
    const Rational b = g.intersect(germ.positive_value, germ.positive_slope);
    const Rational c = g.self_intersection(germ.positive_slope);
    if (c != 0) {
      Rational disc = b * b - a * c, root;
      if (disc > 0 && exact_sqrt(disc, root)) {
        for (const Rational& dt : {Rational((-b - root) / c), Rational((-b + root) / c)}) {
          if (dt > 0 && (!best || dt < *best)) best = dt;
        }
      }
    } else if (b < 0) {
      consider_root(a, 2 * b, best);
    }
  }
  return best;
}

struct Walk {
  std::vector<Piece> pieces;  // parameterised by distance s from the start
  Rational stop;              // first s where the class leaves the pseudo-effective cone
};

Walk walk(const SurfaceGeometry& g, const DivisorClass& start, const DivisorClass& direction,
          const Rational& length) {
  Walk w;
  Rational s = 0;
  for (int guard = 0; s < length; ++guard) {
    if (guard > 100000) throw Error("chamber walk did not terminate");
    DivisorClass point = start + s * direction;
    ZariskiGerm germ = zariski_germ(g, point, direction);
    if (germ.region == ConeRegion::not_pseff) break;
    std::optional<Rational> dt = next_wall(g, germ, direction);
    Rational next = (dt && s + *dt < length) ? Rational(s + *dt) : length;
    w.pieces.push_back({s, next, germ.region, germ.support, germ.positive_value,
                        germ.positive_slope, s});
    s = next;
  }
  w.stop = s;
  return w;
}

Polynomial analytic_square(const SurfaceGeometry& g, const Piece& p) {
  if (p.region != ConeRegion::big) return Polynomial();
  const Rational vv = g.self_intersection(p.p_value);
  const Rational vs = g.intersect(p.p_value, p.p_slope);
  const Rational ss = g.self_intersection(p.p_slope);
  const Rational& a = p.anchor;
  return Polynomial({vv - 2 * a * vs + a * a * ss, 2 * vs - 2 * a * ss, ss});
}

}  // namespace

std::size_t ChamberReport::chamber_of(const Rational& t) const {
  auto it = std::upper_bound(walls.begin(), walls.end(), t);
  return static_cast<std::size_t>(it - walls.begin());
}

ChamberReport chamber_scan(const SurfaceGeometry& g, const DivisorClass& alpha,
                           const DivisorClass& beta, const Rational& t0, const Rational& t1) {
  g.require_member(alpha);
  g.require_member(beta);
  if (beta.is_zero()) throw DomainError("chamber_scan needs a nonzero direction");
  if (!(t0 < t1)) throw DomainError("chamber_scan needs t0 < t1");
  if (!g.nef_duals) {
    throw CapabilityError("chamber_scan needs nef_duals on geometry '" + g.name + "'");
  }

  auto at = [&](const Rational& t) { return alpha + t * beta; };

  // The pseudo-effective part of a line is an interval; find a point in it.
  std::optional<Rational> inside;
  if (zariski_germ(g, at(t0), beta).region != ConeRegion::not_pseff) {
    inside = t0;
  } else {
    for (int level = 1; level <= 12 && !inside; ++level) {
      const long n = 1L << level;
      for (long k = 1; k <= n; k += 2) {
        Rational t = t0 + (t1 - t0) * ratio(k, n);
        if (is_pseff(g, at(t))) {
          inside = t;
          break;
        }
      }
    }
  }

  std::vector<Piece> pieces;
  auto push_dead = [&](const Rational& b, const Rational& e) {
    if (b < e) pieces.push_back({b, e, ConeRegion::not_pseff, {}, g.zero(), g.zero(), b});
  };

  if (!inside) {
    push_dead(t0, t1);
  } else {
    Rational begin = *inside;
    if (begin > t0) {
      Walk left = walk(g, at(begin), -beta, begin - t0);
      begin -= left.stop;
    }
    push_dead(t0, begin);
    Walk right = walk(g, at(begin), beta, t1 - begin);
    for (Piece p : right.pieces) {
      p.begin += begin;
      p.end += begin;
      p.anchor += begin;
      pieces.push_back(std::move(p));
    }
    push_dead(begin + right.stop, t1);
  }

  ChamberReport report;
  report.t_begin = t0;
  report.t_end = t1;
  for (const Piece& p : pieces) {
    Polynomial analytic = analytic_square(g, p);
    if (!report.chambers.empty()) {
      Chamber& last = report.chambers.back();
      if (last.region == p.region && last.support == p.support && last.analytic == analytic) {
        last.t_end = p.end;
        continue;
      }
    }
    Chamber c;
    c.t_begin = p.begin;
    c.t_end = p.end;
    c.region = p.region;
    c.support = p.support;
    c.analytic = std::move(analytic);
    report.chambers.push_back(std::move(c));
  }

  for (Chamber& c : report.chambers) {
    const Rational width = c.t_end - c.t_begin;
    std::vector<Rational> xs, ys;
    for (long k = 1; k <= 4; ++k) {
      xs.push_back(c.t_begin + width * ratio(k, 9));
      ys.push_back(vol(g, at(xs.back())));
    }
    c.fitted = Polynomial::interpolate(xs, ys);
    c.residual = 0;
    for (long k = 5; k <= 8; ++k) {
      Rational t = c.t_begin + width * ratio(k, 9);
      Rational r = volcone::abs(c.fitted(t) - vol(g, at(t)));
      if (r > c.residual) c.residual = r;
    }
  }

  for (std::size_t i = 0; i + 1 < report.chambers.size(); ++i) {
    const Chamber& l = report.chambers[i];
    const Chamber& r = report.chambers[i + 1];
    report.walls.push_back(l.t_end);
    WallMatch m;
    m.t = l.t_end;
    m.value_match = l.fitted(m.t) == r.fitted(m.t);
    m.derivative_match = l.fitted.derivative_at(m.t, 1) == r.fitted.derivative_at(m.t, 1);
    m.interior_to_big_cone = l.region == ConeRegion::big && r.region == ConeRegion::big;
    m.second_derivative_jump = r.fitted.derivative_at(m.t, 2) - l.fitted.derivative_at(m.t, 2);
    report.matches.push_back(std::move(m));
  }
  return report;
}

SegmentProfile segment_profile(const SurfaceGeometry& g, const DivisorClass& alpha,
                               const DivisorClass& beta, std::span<const Rational> t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw DomainError("segment_profile needs a sorted grid");
  }
  SegmentProfile profile{alpha, beta, {}};
  std::optional<ChamberReport> chambers;
  if (t_grid.size() >= 2 && t_grid.front() < t_grid.back() && !beta.is_zero()) {
    chambers = chamber_scan(g, alpha, beta, t_grid.front(), t_grid.back());
  }
  for (const Rational& t : t_grid) {
    DivisorClass d = alpha + t * beta;
    ProfileRow row;
    row.t = t;
    row.volume = vol(g, d);
    if (row.volume > 0) row.derivative = grad_vol(g, d)(beta);
    row.chamber = chambers ? chambers->chamber_of(t) : 0;
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace volcone
