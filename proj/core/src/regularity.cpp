#include "volcone/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "volcone/error.hpp"
#include "volcone/report.hpp"
#include "volcone/volume.hpp"
#include "volcone/zariski.hpp"

namespace volcone::probe {

namespace {

constexpr double kConcavityTolerance = 1e-9;

Rational l1(const RationalVector& v) {
  Rational acc = 0;
  for (const auto& x : v) acc += volcone::abs(x);
  return acc;
}

RationalVector diff(const RationalVector& a, const RationalVector& b) {
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Rejection sampling of classes satisfying `accept`; throws when the region
// yields nothing in a generous number of attempts.
RationalVector draw(Sampler& sampler, const Box& box,
                    const std::function<bool(const RationalVector&)>& accept,
                    const std::string& what) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    RationalVector p = sampler.point(box);
    if (accept(p)) return p;
  }
  throw PreconditionError("region " + box.describe() + " contains no " + what +
                          " classes after rejection sampling");
}

std::optional<std::vector<std::size_t>> support_of(const SurfaceGeometry& g,
                                                   const DivisorClass& d) {
  auto z = try_zariski_decompose(g, d);
  if (!z) return std::nullopt;
  return z->support;
}

// Gradient map x -> 2 Q P(x) on the chamber with the given support, as a matrix.
RationalMatrix gradient_matrix(const SurfaceGeometry& g, const std::vector<std::size_t>& support) {
  const std::size_t n = g.rank();
  const std::size_t s = support.size();
  RationalMatrix gram(s, s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      gram(a, b) = g.intersect(g.negative_curves[support[a]], g.negative_curves[support[b]]);
    }
  }
  RationalMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    DivisorClass p = g.basis_class(k);
    if (s > 0) {
      RationalVector rhs(s);
      for (std::size_t a = 0; a < s; ++a) rhs[a] = g.intersect(p, g.negative_curves[support[a]]);
      RationalVector coeff = *solve(gram, rhs);
      for (std::size_t a = 0; a < s; ++a) p -= coeff[a] * g.negative_curves[support[a]];
    }
    for (std::size_t j = 0; j < n; ++j) m(j, k) = 2 * g.intersect(g.basis_class(j), p);
  }
  return m;
}

Rational l1_operator_norm(const RationalMatrix& m) {
  Rational best = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Rational col = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) col += volcone::abs(m(r, c));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

nlohmann::json to_json(const ProbeReport& report) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : report.witnesses) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : w.points) points.push_back(vector_json(p));
    witnesses.push_back({{"label", w.label}, {"points", points}, {"value", w.value}});
  }
  return {{"kind", report.kind},
          {"geometry", report.geometry},
          {"region", report.region},
          {"samples", report.samples},
          {"seed", report.seed},
          {"statistic_name", report.statistic_name},
          {"statistic", report.statistic},
          {"threshold", report.threshold},
          {"passed", report.passed},
          {"witnesses", witnesses},
          {"details", report.details}};
}

ClassFunction positive_product_against(const SurfaceGeometry& geometry, const DivisorClass& omega) {
  geometry.require_member(omega);
  return [&geometry, omega](const DivisorClass& alpha) -> Rational {
    auto z = try_zariski_decompose(geometry, alpha);
    if (!z) return 0;
    return geometry.intersect(omega, z->positive);
  };
}

Box default_region(const SurfaceGeometry& g) {
  const std::size_t n = g.rank();
  Box box{RationalVector(n, Rational(-4)), RationalVector(n, Rational(4))};
  if (g.name == "p2") {
    box = {{Rational(1, 2)}, {Rational(3)}};
  } else if (g.name == "bl1_p2") {
    box = {{Rational(1, 2), Rational(-4)}, {Rational(4), Rational(4)}};
  } else if (g.name == "bl2_p2") {
    box = {{Rational(1, 2), Rational(-3), Rational(-3)}, {Rational(4), Rational(3), Rational(3)}};
  } else if (g.name == "p1xp1") {
    box = {{Rational(0), Rational(0)}, {Rational(4), Rational(4)}};
  } else if (g.name.starts_with("hirzebruch_")) {
    const long e = -g.intersection[0][0];
    box = {{Rational(0), Rational(0)}, {Rational(4), Rational(4 * e + 4)}};
  }
  return box;
}

ProbeReport concavity_check(const SurfaceGeometry& g, const ClassFunction& fn,
                            const std::string& fn_label, const Rational& exponent,
                            const Box& region, const ProbeOptions& options) {
  if (exponent != Rational(1, 2) && exponent != 1) {
    throw PreconditionError("concavity exponent must be 1/2 or 1 on surfaces, got " +
                            to_string(exponent));
  }
  if (region.dimension() != g.rank()) throw GeometryMismatch("region has the wrong dimension");

  Sampler sampler(options.seed);
  auto big = [&](const RationalVector& p) { return is_big(g, g.make_class(p)); };
  std::vector<std::pair<RationalVector, RationalVector>> pairs;
  pairs.reserve(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    RationalVector x = draw(sampler, region, big, "big");
    RationalVector y = draw(sampler, region, big, "big");
    pairs.emplace_back(std::move(x), std::move(y));
  }

  const bool root = exponent != 1;
  auto power = [&](const Rational& v) {
    double d = to_double(v);
    return root ? std::sqrt(std::max(d, 0.0)) : d;
  };
  const Rational ts[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};

  std::vector<double> margins(pairs.size());
  std::vector<int> which_t(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    const DivisorClass x = g.make_class(pairs[i].first);
    const DivisorClass y = g.make_class(pairs[i].second);
    const Rational fx = fn(x), fy = fn(y);
    double best = std::numeric_limits<double>::infinity();
    int best_t = 0;
    for (int k = 0; k < 3; ++k) {
      const Rational& t = ts[k];
      const DivisorClass mid = t * x + (1 - t) * y;
      const Rational fm = fn(mid);
      double margin;
      if (!root) {
        margin = to_double(fm - t * fx - (1 - t) * fy);
      } else {
        margin = power(fm) - (to_double(t) * power(fx) + to_double(1 - t) * power(fy));
      }
      if (margin < best) {
        best = margin;
        best_t = k;
      }
    }
    margins[i] = best;
    which_t[i] = best_t;
  });

  ProbeReport report;
  report.kind = "concavity";
  report.geometry = g.name;
  report.region = region.describe();
  report.samples = pairs.size();
  report.seed = options.seed;
  report.statistic_name = "min_margin";
  report.threshold = -kConcavityTolerance;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < margins.size(); ++i) {
    if (margins[i] < margins[arg]) arg = i;
  }
  report.statistic = margins.empty() ? 0.0 : margins[arg];
  report.passed = report.statistic >= -kConcavityTolerance;
  if (!margins.empty()) {
    report.witnesses.push_back({"argmin (x, y, t)",
                                {pairs[arg].first, pairs[arg].second, {ts[which_t[arg]]}},
                                report.statistic});
  }
  report.details = {{"function", fn_label}, {"exponent", to_string(exponent)}};
  return report;
}

Rational kt_check(const SurfaceGeometry& g, const DivisorClass& a, const DivisorClass& b) {
  if (!is_nef(g, a) || !is_nef(g, b)) {
    throw PreconditionError("Khovanskii-Teissier check needs nef classes");
  }
  const Rational ab = g.intersect(a, b);
  return ab * ab - g.self_intersection(a) * g.self_intersection(b);
}

ProbeReport kt_probe(const SurfaceGeometry& g, const Box& region, const ProbeOptions& options) {
  Sampler sampler(options.seed);
  auto nef = [&](const RationalVector& p) { return is_nef(g, g.make_class(p)); };
  std::vector<std::pair<RationalVector, RationalVector>> pairs;
  std::vector<Rational> lambdas;
  for (std::size_t i = 0; i < options.samples; ++i) {
    RationalVector a = draw(sampler, region, nef, "nef");
    RationalVector b = draw(sampler, region, nef, "nef");
    pairs.emplace_back(std::move(a), std::move(b));
    lambdas.push_back(sampler.uniform(Rational(1, 8), Rational(8)));
  }

  std::vector<Rational> margins(pairs.size());
  std::vector<Rational> proportional(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    const DivisorClass a = g.make_class(pairs[i].first);
    const DivisorClass b = g.make_class(pairs[i].second);
    margins[i] = kt_check(g, a, b);
    proportional[i] = kt_check(g, a, lambdas[i] * a);
  });

  ProbeReport report;
  report.kind = "kt";
  report.geometry = g.name;
  report.region = region.describe();
  report.samples = pairs.size();
  report.seed = options.seed;
  report.statistic_name = "min_margin";
  report.threshold = 0.0;
  std::size_t arg = 0, negatives = 0, proportional_nonzero = 0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (margins[i] < margins[arg]) arg = i;
    if (margins[i] < 0) ++negatives;
    if (proportional[i] != 0) ++proportional_nonzero;
  }
  report.statistic = margins.empty() ? 0.0 : to_double(margins[arg]);
  report.passed = negatives == 0 && proportional_nonzero == 0;
  if (!margins.empty()) {
    report.witnesses.push_back({"argmin (A, B)", {pairs[arg].first, pairs[arg].second},
                                report.statistic});
  }
  report.details = {{"negative_margins", negatives},
                    {"proportional_pairs", pairs.size()},
                    {"proportional_nonzero", proportional_nonzero},
                    {"min_margin_exact", margins.empty() ? "0" : to_string(margins[arg])}};
  return report;
}

Rational hessian_entry(const SurfaceGeometry& g, const DivisorClass& x, const DivisorClass& dir1,
                       const DivisorClass& dir2, const Rational& step) {
  if (step <= 0) throw PreconditionError("finite-difference step must be positive");
  const DivisorClass a = step * dir1;
  const DivisorClass b = step * dir2;
  const Rational num = vol(g, x + a + b) - vol(g, x + a - b) - vol(g, x - a + b) + vol(g, x - a - b);
  return num / (4 * step * step);
}

namespace {

struct HessianSample {
  Rational entry;
  bool non_big = false;
  bool straddles = false;
  std::vector<std::size_t> support;
};

HessianSample hessian_sample(const SurfaceGeometry& g, const DivisorClass& x,
                             const DivisorClass& dir1, const DivisorClass& dir2,
                             const Rational& step) {
  HessianSample s;
  s.entry = hessian_entry(g, x, dir1, dir2, step);
  auto centre = support_of(g, x);
  if (centre) s.support = *centre;
  // The stencil spans up to 2 * step along each direction.
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      DivisorClass p = x + (step * i) * dir1 + (step * j) * dir2;
      if (!is_big(g, p)) {
        s.non_big = true;
        continue;
      }
      auto sup = support_of(g, p);
      if (!centre || *sup != *centre) s.straddles = true;
    }
  }
  return s;
}

}  // namespace

ProbeReport hessian_probe(const SurfaceGeometry& g, std::span<const DivisorClass> grid,
                          const DivisorClass& dir1, const DivisorClass& dir2,
                          const Rational& step) {
  std::vector<HessianSample> samples(grid.size());
  parallel_for(grid.size(), 1, [&](std::size_t i) {
    samples[i] = hessian_sample(g, grid[i], dir1, dir2, step);
  });

  ProbeReport report;
  report.kind = "hessian";
  report.geometry = g.name;
  report.region = "grid of " + std::to_string(grid.size()) + " classes";
  report.samples = grid.size();
  report.statistic_name = "sup_abs_entry";

  double sup = 0.0;
  std::size_t sup_at = 0, flagged = 0, straddling = 0;
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    entries.push_back({{"index", i},
                       {"entry", to_double(s.entry)},
                       {"non_big", s.non_big},
                       {"straddles_wall", s.straddles}});
    if (s.non_big) {
      ++flagged;
      continue;
    }
    if (s.straddles) ++straddling;
    double v = std::abs(to_double(s.entry));
    if (v > sup) {
      sup = v;
      sup_at = i;
    }
  }

  // Jumps between consecutive clean samples.
  double variation = 0.0, jump = 0.0;
  std::optional<std::size_t> prev, jump_left, jump_right;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.non_big || s.straddles) continue;
    if (prev) {
      const auto& p = samples[*prev];
      double d = std::abs(to_double(s.entry - p.entry));
      if (p.support == s.support) {
        variation = std::max(variation, d);
      } else if (d > jump) {
        jump = d;
        jump_left = prev;
        jump_right = i;
      }
    }
    prev = i;
  }
  const bool jump_detected = jump > 10.0 * variation + 1e-12;

  report.statistic = sup;
  report.threshold = std::numeric_limits<double>::infinity();
  report.passed = std::isfinite(sup);
  if (!grid.empty()) report.witnesses.push_back({"sup", {grid[sup_at].coords()}, sup});
  report.details = {{"step", to_string(step)},
                    {"flagged_non_big", flagged},
                    {"straddling_samples", straddling},
                    {"within_chamber_variation", variation},
                    {"jump_detected", jump_detected},
                    {"jump", jump_detected ? jump : 0.0},
                    {"entries", entries}};
  if (jump_detected) {
    report.details["jump_between"] = {*jump_left, *jump_right};
    report.witnesses.push_back(
        {"jump", {grid[*jump_left].coords(), grid[*jump_right].coords()}, jump});
  }
  return report;
}

ProbeReport hessian_sup(const SurfaceGeometry& g, std::span<const DivisorClass> grid,
                        const Rational& step) {
  ProbeReport report;
  report.kind = "hessian_sup";
  report.geometry = g.name;
  report.region = "grid of " + std::to_string(grid.size()) + " classes";
  report.samples = grid.size();
  report.statistic_name = "sup_abs_entry";
  report.threshold = std::numeric_limits<double>::infinity();
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < g.rank(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < g.rank(); ++j) {
      ProbeReport r = hessian_probe(g, grid, g.basis_class(i), g.basis_class(j), step);
      row.push_back(r.statistic);
      if (r.statistic >= report.statistic) {
        report.statistic = r.statistic;
        report.witnesses = {r.witnesses.front()};
      }
    }
    matrix.push_back(row);
  }
  report.passed = std::isfinite(report.statistic);
  report.details = {{"step", to_string(step)}, {"sup_by_entry", matrix}};
  return report;
}

ProbeReport lipschitz_gradient_estimate(const SurfaceGeometry& g, const Box& region,
                                        const ProbeOptions& options, std::optional<double> bound) {
  if (region.dimension() != g.rank()) throw GeometryMismatch("region has the wrong dimension");
  for (const auto& corner : region.corners()) {
    if (!is_big(g, g.make_class(corner))) {
      throw PreconditionError("region " + region.describe() + " leaves the big cone at " +
                              to_string(corner));
    }
  }

  Sampler sampler(options.seed);
  std::vector<std::pair<RationalVector, RationalVector>> pairs;
  for (std::size_t i = 0; i < options.samples; ++i) {
    RationalVector x = sampler.point(region);
    RationalVector y = sampler.point(region);
    pairs.emplace_back(std::move(x), std::move(y));
  }

  std::vector<std::optional<Rational>> quotients(pairs.size());
  std::vector<char> crosses(pairs.size(), 0);
  std::vector<std::vector<std::size_t>> supports_x(pairs.size()), supports_y(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    const Rational dx = l1(diff(x, y));
    if (dx == 0) return;
    const DivisorClass cx = g.make_class(x), cy = g.make_class(y);
    const Covector gx = grad_vol(g, cx), gy = grad_vol(g, cy);
    quotients[i] = l1(diff(gx.coords, gy.coords)) / dx;
    supports_x[i] = *support_of(g, cx);
    supports_y[i] = *support_of(g, cy);
    crosses[i] = supports_x[i] != supports_y[i];
  });

  // Chamber-derived bound: the gradient is linear on each chamber and
  // continuous across walls, so the quotient is at most the largest
  // l1 operator norm of the chamber gradient maps met in the box.
  std::set<std::vector<std::size_t>> supports;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!quotients[i]) continue;
    supports.insert(supports_x[i]);
    supports.insert(supports_y[i]);
  }
  for (const auto& corner : region.corners()) supports.insert(*support_of(g, g.make_class(corner)));
  Rational derived = 0;
  for (const auto& s : supports) derived = std::max(derived, l1_operator_norm(gradient_matrix(g, s)));

  ProbeReport report;
  report.kind = "lipschitz";
  report.geometry = g.name;
  report.region = region.describe();
  report.seed = options.seed;
  report.statistic_name = "max_gradient_quotient";
  std::size_t arg = pairs.size(), skipped = 0, cross = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!quotients[i]) {
      ++skipped;
      continue;
    }
    if (crosses[i]) ++cross;
    if (arg == pairs.size() || *quotients[i] > *quotients[arg]) arg = i;
  }
  report.samples = pairs.size() - skipped;
  report.statistic = arg < pairs.size() ? to_double(*quotients[arg]) : 0.0;
  report.threshold = bound.value_or(to_double(derived)) + 1e-9;
  report.passed = std::isfinite(report.statistic) && report.statistic <= report.threshold;
  if (arg < pairs.size()) {
    report.witnesses.push_back({"argmax (x, y)", {pairs[arg].first, pairs[arg].second},
                                report.statistic});
  }
  report.details = {{"skipped_identical_pairs", skipped},
                    {"cross_wall_pairs", cross},
                    {"chamber_bound", rational_json(derived)},
                    {"chambers_seen", supports.size()}};
  return report;
}

OneSidedDerivative one_sided_derivatives(const SurfaceGeometry& g, const DivisorClass& alpha,
                                         const DivisorClass& direction) {
  ChamberReport chambers = chamber_scan(g, alpha, direction, Rational(-1), Rational(1));
  const Rational zero = 0;
  const std::size_t right = chambers.chamber_of(zero);
  const bool on_wall = std::find(chambers.walls.begin(), chambers.walls.end(), zero) !=
                       chambers.walls.end();
  const std::size_t left = on_wall ? right - 1 : right;
  return {direction.coords(), chambers.chambers[right].fitted.derivative_at(zero, 1),
          chambers.chambers[left].fitted.derivative_at(zero, 1)};
}

ProbeReport boundary_lipschitz_probe(const SurfaceGeometry& g, const DivisorClass& alpha,
                                     std::span<const DivisorClass> directions,
                                     const Rational& radius, const ProbeOptions& options,
                                     std::optional<double> bound) {
  g.require_member(alpha);
  if (!is_pseff(g, alpha) || vol(g, alpha) != 0) {
    throw PreconditionError("boundary probe needs a pseudo-effective class with Vol = 0; " +
                            to_string(alpha.coords()) + " is not on the boundary of the big cone");
  }
  if (radius <= 0) throw PreconditionError("radius must be positive");

  Sampler sampler(options.seed);
  std::vector<RationalVector> hs;
  while (hs.size() < options.samples) {
    RationalVector h(g.rank());
    for (auto& x : h) x = sampler.uniform(Rational(-1), Rational(1));
    const Rational norm = l1(h);
    const Rational r = sampler.uniform(Rational(0), radius);
    if (norm == 0 || r == 0) continue;
    for (auto& x : h) x *= r / norm;
    hs.push_back(std::move(h));
  }

  std::vector<Rational> quotients(hs.size());
  std::vector<char> into_big(hs.size(), 0);
  parallel_for(hs.size(), options.threads, [&](std::size_t i) {
    const Rational v = vol(g, alpha + g.make_class(hs[i]));
    into_big[i] = v > 0;
    quotients[i] = v / l1(hs[i]);
  });

  std::vector<DivisorClass> dirs(directions.begin(), directions.end());
  if (dirs.empty()) {
    for (std::size_t i = 0; i < g.rank(); ++i) {
      dirs.push_back(g.basis_class(i));
      dirs.push_back(-g.basis_class(i));
    }
  }
  nlohmann::json one_sided = nlohmann::json::array();
  Rational mismatch = 0;
  for (const auto& d : dirs) {
    OneSidedDerivative o = one_sided_derivatives(g, alpha, d);
    mismatch = std::max(mismatch, volcone::abs(o.right - o.left));
    one_sided.push_back({{"direction", vector_json(o.direction)},
                         {"right", rational_json(o.right)},
                         {"left", rational_json(o.left)}});
  }

  ProbeReport report;
  report.kind = "boundary";
  report.geometry = g.name;
  report.region = "l1 ball of radius " + to_string(radius) + " about " + to_string(alpha.coords());
  report.samples = hs.size();
  report.seed = options.seed;
  report.statistic_name = "max_difference_quotient";
  std::size_t arg = 0, inside = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (quotients[i] > quotients[arg]) arg = i;
    inside += into_big[i] ? 1 : 0;
  }
  report.statistic = hs.empty() ? 0.0 : to_double(quotients[arg]);
  report.threshold = bound.value_or(std::numeric_limits<double>::infinity());
  report.passed = std::isfinite(report.statistic) && report.statistic <= report.threshold;
  if (!hs.empty()) report.witnesses.push_back({"argmax h", {hs[arg]}, report.statistic});
  report.details = {{"samples_into_big_cone", inside},
                    {"samples_outside_big_cone", hs.size() - inside},
                    {"one_sided_derivatives", one_sided},
                    {"max_one_sided_mismatch", rational_json(mismatch)}};
  return report;
}

}  // namespace volcone::probe
