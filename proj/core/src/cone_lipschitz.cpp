#include "volcone/cone_lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "volcone/error.hpp"
#include "volcone/linalg.hpp"
#include "volcone/volume.hpp"
#include "volcone/zariski.hpp"

namespace volcone::cone {

namespace {

constexpr double kSlack = 1e-9;

bool all_positive(const RationalVector& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& v) { return v > 0; });
}

bool all_nonnegative(const RationalVector& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& v) { return v >= 0; });
}

RationalVector combine(const RationalVector& center, std::span<const RationalVector> basis,
                       const RationalVector& coeffs) {
  RationalVector out = center;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs[i] * basis[i][j];
  }
  return out;
}

RationalVector subtract(const RationalVector& a, const RationalVector& b) {
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RationalVector scaled(const RationalVector& a, const Rational& s) {
  RationalVector out(a);
  for (auto& x : out) x *= s;
  return out;
}

void require_basis(std::span<const RationalVector> basis, std::size_t dimension) {
  if (basis.size() != dimension) {
    throw DomainError("basis has " + std::to_string(basis.size()) + " vectors, expected " +
                      std::to_string(dimension));
  }
  RationalMatrix m(dimension, dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    if (basis[i].size() != dimension) throw DomainError("basis vector has the wrong dimension");
    for (std::size_t j = 0; j < dimension; ++j) m(j, i) = basis[i][j];
  }
  if (rank(m) != dimension) throw DomainError("basis is singular");
}

// Vertices center +- radius e_i of the basis-norm ball, and midpoints of its edges.
std::vector<RationalVector> ball_skeleton(const RationalVector& center, const Rational& radius,
                                          std::span<const RationalVector> basis,
                                          bool with_edges) {
  std::vector<RationalVector> pts;
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (int s : {1, -1}) {
      RationalVector c(n, Rational(0));
      c[i] = s * radius;
      pts.push_back(combine(center, basis, c));
    }
  }
  if (with_edges) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (int si : {1, -1}) {
          for (int sj : {1, -1}) {
            RationalVector c(n, Rational(0));
            c[i] = si * radius / 2;
            c[j] = sj * radius / 2;
            pts.push_back(combine(center, basis, c));
          }
        }
      }
    }
  }
  return pts;
}

// Boundary point of the basis-norm ball.
RationalVector sphere_point(Sampler& sampler, const RationalVector& center, const Rational& radius,
                            std::span<const RationalVector> basis) {
  RationalVector c(basis.size());
  Rational norm = 0;
  while (norm == 0) {
    norm = 0;
    for (auto& x : c) {
      x = sampler.uniform(Rational(-1), Rational(1));
      norm += volcone::abs(x);
    }
  }
  for (auto& x : c) x *= radius / norm;
  return combine(center, basis, c);
}

void require_ball_in_cone(const ConeFunction& f, const RationalVector& center,
                          const Rational& radius, std::span<const RationalVector> basis,
                          Sampler& sampler, const std::string& what) {
  for (const auto& v : ball_skeleton(center, radius, basis, false)) {
    if (!f.closure_member(v)) {
      throw PreconditionError("radius " + to_string(radius) + " too large: the ball about " +
                              what + " reaches " + to_string(v) + " outside the cone");
    }
  }
  for (int i = 0; i < 64; ++i) {
    RationalVector p = sphere_point(sampler, center, radius, basis);
    if (!f.closure_member(p)) {
      throw PreconditionError("radius " + to_string(radius) + " too large: the ball about " +
                              what + " reaches " + to_string(p) + " outside the cone");
    }
  }
}

double power_of(double lambda, const Rational& degree) {
  return std::pow(lambda, to_double(degree));
}

}  // namespace

ConeFunction monomial(const Rational& a, const Rational& b) {
  if (a < 0 || b < 0 || a + b < 1) {
    throw DomainError("monomial exponents must be nonnegative with a + b >= 1");
  }
  const double da = to_double(a), db = to_double(b);
  return {"monomial:" + to_string(a) + "," + to_string(b),
          2,
          a + b,
          all_positive,
          all_nonnegative,
          [da, db](const RationalVector& x) {
            return std::pow(to_double(x[0]), da) * std::pow(to_double(x[1]), db);
          },
          false};
}

ConeFunction linear_form(const RationalVector& weights) {
  if (weights.empty() || !all_nonnegative(weights)) {
    throw DomainError("linear form weights must be nonnegative");
  }
  return {"linear:" + to_string(weights),
          weights.size(),
          Rational(1),
          all_positive,
          all_nonnegative,
          [weights](const RationalVector& x) { return to_double(dot(weights, x)); },
          false};
}

ConeFunction difference_form() {
  return {"difference",
          2,
          Rational(1),
          all_positive,
          all_nonnegative,
          [](const RationalVector& x) { return to_double(x[0] - x[1]); },
          false};
}

ConeFunction volume_function(const SurfaceGeometry& geometry) {
  auto g = std::make_shared<const SurfaceGeometry>(geometry);
  return {"vol:" + geometry.name,
          geometry.rank(),
          Rational(2),
          [g](const RationalVector& x) { return is_big(*g, g->make_class(x)); },
          [g](const RationalVector& x) { return is_pseff(*g, g->make_class(x)); },
          [g](const RationalVector& x) { return to_double(vol(*g, g->make_class(x))); },
          false};
}

Rational basis_norm(const RationalVector& v, std::span<const RationalVector> basis) {
  require_basis(basis, v.size());
  const std::size_t n = v.size();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(j, i) = basis[i][j];
  }
  const RationalVector c = *solve(m, v);
  Rational acc = 0;
  for (const auto& x : c) acc += volcone::abs(x);
  return acc;
}

RationalVector ball_point(Sampler& sampler, const RationalVector& center, const Rational& radius,
                          std::span<const RationalVector> basis) {
  RationalVector c(basis.size());
  Rational norm = 0;
  while (norm == 0) {
    norm = 0;
    for (auto& x : c) {
      x = sampler.uniform(Rational(-1), Rational(1));
      norm += volcone::abs(x);
    }
  }
  const Rational r = radius * sampler.unit();
  for (auto& x : c) x *= r / norm;
  return combine(center, basis, c);
}

AxiomReport verify_axioms(const ConeFunction& f, const Box& region, std::size_t samples,
                          std::uint64_t seed, unsigned threads) {
  if (region.dimension() != f.dimension) throw DomainError("region has the wrong dimension");
  AxiomReport report;
  report.samples = samples;
  report.seed = seed;

  Sampler sampler(seed);
  auto member_point = [&]() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      RationalVector p = sampler.point(region);
      if (f.member(p)) return p;
    }
    throw PreconditionError("region " + region.describe() + " does not meet the cone");
  };
  struct Sample {
    RationalVector x, y;
    Rational lambda;
  };
  std::vector<Sample> draws;
  draws.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    RationalVector x = member_point();
    RationalVector y = member_point();
    Rational lambda = sampler.uniform(Rational(1, 2), Rational(2));
    draws.push_back({std::move(x), std::move(y), std::move(lambda)});
  }

  struct Outcome {
    double fx = 0, flx = 0, expected = 0, fxy = 0;
  };
  std::vector<Outcome> out(draws.size());
  auto body = [&](std::size_t i) {
    const auto& s = draws[i];
    RationalVector sum(s.x.size());
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = s.x[j] + s.y[j];
    out[i].fx = f.evaluate(s.x);
    out[i].flx = f.evaluate(scaled(s.x, s.lambda));
    out[i].expected = power_of(to_double(s.lambda), f.degree) * out[i].fx;
    out[i].fxy = f.evaluate(sum);
  };
  parallel_for(draws.size(), f.serial ? 1U : threads, body);

  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& s = draws[i];
    const auto& o = out[i];
    if (!std::isfinite(o.fx) || !std::isfinite(o.fxy)) {
      if (report.bounded) {
        report.failures.push_back({'c', {s.x}, o.fx, 0.0});
      }
      report.bounded = false;
      continue;
    }
    report.sup_sampled = std::max({report.sup_sampled, o.fx, o.fxy});
    if (std::abs(o.flx - o.expected) > kSlack * std::abs(o.expected) + 1e-300) {
      if (report.homogeneous) {
        report.failures.push_back({'a', {s.x, {s.lambda}}, o.flx, o.expected});
      }
      report.homogeneous = false;
    }
    if (o.fxy < o.fx - kSlack * std::abs(o.fx)) {
      if (report.monotone) report.failures.push_back({'b', {s.x, s.y}, o.fxy, o.fx});
      report.monotone = false;
    }
  }
  return report;
}

LipschitzCertificate lipschitz_certificate(const ConeFunction& f, const RationalVector& center,
                                           const Rational& radius,
                                           std::span<const RationalVector> basis,
                                           std::optional<double> sup_hint,
                                           std::size_t sup_samples, std::uint64_t seed) {
  if (center.size() != f.dimension) throw DomainError("center has the wrong dimension");
  if (radius <= 0) throw PreconditionError("radius must be positive");
  require_basis(basis, f.dimension);
  if (f.member(RationalVector(f.dimension, Rational(0)))) {
    throw PreconditionError("the cone contains 0; the certificate needs a proper cone");
  }
  for (const auto& e : basis) {
    if (!f.closure_member(e)) {
      throw PreconditionError("basis vector " + to_string(e) + " is not in the closed cone");
    }
  }
  if (!f.member(center)) throw PreconditionError("center " + to_string(center) + " is not in the cone");

  Sampler sampler(seed);
  require_ball_in_cone(f, center, radius, basis, sampler, to_string(center));
  const RationalVector half = scaled(center, Rational(1, 2));
  require_ball_in_cone(f, half, radius, basis, sampler, to_string(half));

  LipschitzCertificate cert;
  cert.center = center;
  cert.radius = radius;
  cert.basis.assign(basis.begin(), basis.end());
  cert.valid_radius = radius / 4;

  if (sup_hint) {
    cert.sup_u = *sup_hint;
    cert.sup_from_hint = true;
  } else {
    std::vector<RationalVector> pts = ball_skeleton(center, radius, basis, true);
    pts.push_back(center);
    for (std::size_t i = 0; i < sup_samples; ++i) {
      pts.push_back(i % 2 ? ball_point(sampler, center, radius, basis)
                          : sphere_point(sampler, center, radius, basis));
    }
    std::vector<double> values(pts.size());
    parallel_for(pts.size(), 1, [&](std::size_t i) { values[i] = f.evaluate(pts[i]); });
    cert.sup_u = *std::max_element(values.begin(), values.end());
  }
  cert.constant = std::pow(2.0, to_double(f.degree)) / to_double(radius) * cert.sup_u * cert.safety;
  return cert;
}

EmpiricalLipschitz empirical_lipschitz(const ConeFunction& f, const LipschitzCertificate& cert,
                                       std::size_t pairs, std::uint64_t seed, unsigned threads) {
  Sampler sampler(seed);
  std::vector<std::pair<RationalVector, RationalVector>> draws;
  draws.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    RationalVector a = ball_point(sampler, cert.center, cert.valid_radius, cert.basis);
    RationalVector b = ball_point(sampler, cert.center, cert.valid_radius, cert.basis);
    draws.emplace_back(std::move(a), std::move(b));
  }

  std::vector<std::optional<double>> quotients(draws.size());
  parallel_for(draws.size(), f.serial ? 1U : threads, [&](std::size_t i) {
    const auto& [a, b] = draws[i];
    const Rational norm = basis_norm(subtract(a, b), cert.basis);
    if (norm == 0) return;
    quotients[i] = std::abs(f.evaluate(a) - f.evaluate(b)) / to_double(norm);
  });

  EmpiricalLipschitz result;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (!quotients[i]) {
      ++result.skipped;
      continue;
    }
    ++result.pairs;
    if (result.witness.empty() || *quotients[i] > result.max_quotient) {
      result.max_quotient = *quotients[i];
      result.witness = {draws[i].first, draws[i].second};
    }
  }
  return result;
}

ChainReport chain_check(const ConeFunction& f, const LipschitzCertificate& cert,
                        const Box& cone_box, std::size_t samples, std::uint64_t seed) {
  if (cone_box.dimension() != f.dimension) throw DomainError("cone box has the wrong dimension");
  Sampler sampler(seed);
  ChainReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double d = to_double(f.degree);
  const double eps = to_double(cert.radius);
  const double upper_c = std::pow(2.0, d);

  for (std::size_t i = 0; i < samples; ++i) {
    RationalVector alpha = ball_point(sampler, cert.center, cert.radius, cert.basis);
    if (basis_norm(subtract(alpha, cert.center), cert.basis) >= cert.radius) continue;
    RationalVector h;
    for (int attempt = 0; attempt < 1000 && h.empty(); ++attempt) {
      RationalVector cand = sampler.point(cone_box);
      if (!f.member(cand)) continue;
      const Rational norm = basis_norm(cand, cert.basis);
      // Rescale into (0, radius).
      const Rational target = cert.radius * sampler.unit();
      if (target == 0 || target == cert.radius) continue;
      h = scaled(cand, target / norm);
    }
    if (h.empty()) throw PreconditionError("cone box " + cone_box.describe() + " misses the cone");
    const double hn = to_double(basis_norm(h, cert.basis)) / eps;

    RationalVector minus = subtract(alpha, h);
    RationalVector plus = alpha;
    for (std::size_t j = 0; j < plus.size(); ++j) plus[j] += h[j];
    const double fa = f.evaluate(alpha);
    const double fm = f.evaluate(minus);
    const double fp = f.evaluate(plus);
    const double tol = kSlack * std::max(std::abs(fa), 1e-300);

    const double margins[] = {fa - fm, fm - (1 - d * hn) * fa, fp - fa, (1 + upper_c * hn) * fa - fp};
    bool lower_bad = margins[0] < -tol || margins[1] < -tol;
    bool upper_bad = margins[2] < -tol || margins[3] < -tol;
    ++report.samples;
    for (double m : margins) {
      report.worst_margin = std::min(report.worst_margin, fa > 0 ? m / fa : m);
    }
    if (lower_bad) ++report.lower_violations;
    if (upper_bad) ++report.upper_violations;
    if ((lower_bad || upper_bad) && report.witness.empty()) report.witness = {alpha, h};
  }
  if (report.samples == 0) report.worst_margin = 0.0;
  return report;
}

}  // namespace volcone::cone
