#include "volcone/commands.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "volcone/bundle.hpp"
#include "volcone/class_parser.hpp"
#include "volcone/cone_lipschitz.hpp"
#include "volcone/error.hpp"
#include "volcone/geometry_io.hpp"
#include "volcone/regularity.hpp"
#include "volcone/report.hpp"
#include "volcone/toric.hpp"
#include "volcone/volume.hpp"
#include "volcone/zariski.hpp"

namespace volcone::cli {

namespace {

using nlohmann::json;

SurfaceGeometry geometry(const Params& p) {
  if (p.geom.empty()) throw UsageError("--geom is required");
  return resolve_geometry(p.geom);
}

DivisorClass required_class(const SurfaceGeometry& g, const std::string& expr,
                            const std::string& flag) {
  if (expr.empty()) throw UsageError(flag + " is required");
  return parse_class(expr, g);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> optional_double(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return to_double(parse_rational(text));
}

// "lo:hi,lo:hi,..."
Box parse_box(const std::string& text) {
  Box box;
  for (const auto& range : split(text, ',')) {
    auto colon = range.find(':');
    if (colon == std::string::npos) throw UsageError("box ranges look like lo:hi, got '" + range + "'");
    box.lo.push_back(parse_rational(range.substr(0, colon)));
    box.hi.push_back(parse_rational(range.substr(colon + 1)));
    if (box.hi.back() < box.lo.back()) throw UsageError("box range '" + range + "' is reversed");
  }
  if (box.lo.empty()) throw UsageError("empty box");
  return box;
}

std::string str(const Rational& v) { return to_string(v); }

std::string region_name(ConeRegion r) {
  switch (r) {
    case ConeRegion::big:
      return "big";
    case ConeRegion::boundary:
      return "boundary";
    case ConeRegion::not_pseff:
      return "not_pseff";
  }
  return "unknown";
}

std::string support_text(const SurfaceGeometry& g, const std::vector<std::size_t>& support) {
  std::string out;
  for (std::size_t i : support) {
    if (!out.empty()) out += " ";
    out += format_class(g, g.negative_curves[i]);
  }
  return out.empty() ? "-" : out;
}

std::vector<Rational> grid(const Params& p) {
  const Rational t0 = parse_rational(p.t0), t1 = parse_rational(p.t1);
  if (p.steps == 0) throw UsageError("--steps must be positive");
  if (t1 < t0) throw UsageError("--t1 must not be below --t0");
  std::vector<Rational> out;
  for (std::size_t i = 0; i <= p.steps; ++i) {
    out.push_back(t0 + (t1 - t0) * ratio(static_cast<long>(i), static_cast<long>(p.steps)));
  }
  return out;
}

std::string points_text(const std::vector<RationalVector>& points) {
  std::string out;
  for (const auto& pt : points) {
    if (!out.empty()) out += " ";
    out += to_string(pt);
  }
  return out;
}

Output from_probe(const probe::ProbeReport& report) {
  Output o;
  o.result = probe::to_json(report);
  o.summary = {{"kind", report.kind},
               {"geometry", report.geometry},
               {"region", report.region},
               {"samples", std::to_string(report.samples)},
               {"seed", std::to_string(report.seed)},
               {report.statistic_name, json(report.statistic).dump()},
               {"threshold", json(report.threshold).dump()},
               {"passed", report.passed ? "yes" : "no"}};
  o.header = {"witness", "points", "value"};
  for (const auto& w : report.witnesses) {
    o.rows.push_back({w.label, points_text(w.points), json(w.value).dump()});
  }
  o.exit_code = report.passed ? 0 : 1;
  return o;
}

// Classes on a bundle base: degrees for P^1, labelled expressions on surfaces.
DivisorClass base_class(const bundle::BaseVolume& base, const std::string& expr) {
  if (const SurfaceGeometry* g = base.geometry()) return parse_class(expr, *g);
  return base.make_class({parse_rational(expr)});
}

json quadrature_json(const bundle::QuadratureResult& q) {
  json sub = json::array();
  for (const auto& u : q.subdivision) sub.push_back(str(u));
  json out = {{"value", round12(q.value)},
              {"scheme", q.scheme == bundle::Scheme::exact_piecewise ? "exact_piecewise" : "adaptive"},
              {"error_bound", q.error_bound},
              {"subdivision", sub}};
  if (q.exact) out["exact"] = rational_json(*q.exact);
  return out;
}

std::string quadrature_text(const bundle::QuadratureResult& q) {
  return q.exact ? str(*q.exact) : json(round12(q.value)).dump();
}

bundle::BundleModel model(const Params& p) {
  auto base = bundle::make_base(p.base);
  std::optional<Rational> kappa;
  if (!p.kappa.empty()) kappa = parse_rational(p.kappa);
  return bundle::make_model(base, base_class(*base, p.a), base_class(*base, p.d), kappa);
}

json model_json(const bundle::BundleModel& m) {
  return {{"base", m.base->name()},
          {"dimension", m.dimension()},
          {"A", vector_json(m.ample.coords())},
          {"D", vector_json(m.divisor.coords())},
          {"kappa", rational_json(m.kappa)},
          {"calibrated", m.calibrated}};
}

struct ConeSetup {
  cone::ConeFunction f;
  std::optional<SurfaceGeometry> g;
  RationalVector center;
  std::vector<RationalVector> basis;
  Box cone_box;
};

RationalVector cone_point(const ConeSetup& s, const std::string& text) {
  if (s.g) return parse_class(text, *s.g).coords();
  return parse_coords(text);
}

ConeSetup cone_setup(const Params& p) {
  ConeSetup s;
  if (p.fn == "vol") {
    s.g = geometry(p);
    s.f = cone::volume_function(*s.g);
  } else if (p.fn.starts_with("monomial:")) {
    RationalVector ab = parse_coords(p.fn.substr(9));
    if (ab.size() != 2) throw UsageError("monomial needs two exponents, e.g. monomial:1,1");
    s.f = cone::monomial(ab[0], ab[1]);
  } else if (p.fn.starts_with("linear:")) {
    s.f = cone::linear_form(parse_coords(p.fn.substr(7)));
  } else if (p.fn == "difference") {
    s.f = cone::difference_form();
  } else {
    throw UsageError("--fn must be vol, monomial:a,b, linear:w1,...,wn or difference");
  }
  if (p.center.empty()) throw UsageError("--center is required");
  s.center = cone_point(s, p.center);
  if (p.basis.empty()) {
    for (std::size_t i = 0; i < s.f.dimension; ++i) {
      RationalVector e(s.f.dimension, Rational(0));
      e[i] = 1;
      s.basis.push_back(e);
    }
  } else {
    for (const auto& item : split(p.basis, ';')) s.basis.push_back(cone_point(s, item));
  }
  if (!p.cone_box.empty()) {
    s.cone_box = parse_box(p.cone_box);
  } else if (s.g) {
    s.cone_box = probe::default_region(*s.g);
  } else {
    s.cone_box = {RationalVector(s.f.dimension, Rational(1, 10)),
                  RationalVector(s.f.dimension, Rational(3))};
  }
  return s;
}

json certificate_json(const cone::LipschitzCertificate& c) {
  json basis = json::array();
  for (const auto& b : c.basis) basis.push_back(vector_json(b));
  return {{"center", vector_json(c.center)},
          {"radius", rational_json(c.radius)},
          {"basis", basis},
          {"sup_u", c.sup_u},
          {"sup_from_hint", c.sup_from_hint},
          {"safety", c.safety},
          {"constant", c.constant},
          {"valid_radius", rational_json(c.valid_radius)}};
}

json axioms_json(const cone::AxiomReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    json w = json::array();
    for (const auto& pt : f.witness) w.push_back(vector_json(pt));
    failures.push_back(
        {{"axiom", std::string(1, f.axiom)}, {"witness", w}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  }
  return {{"homogeneous", r.homogeneous}, {"monotone", r.monotone},
          {"bounded", r.bounded},         {"sup_sampled", r.sup_sampled},
          {"samples", r.samples},         {"seed", r.seed},
          {"failures", failures},         {"passed", r.passed()}};
}

}  // namespace

Output geom_list(const Params&) {
  Output o;
  o.header = {"name", "rank", "basis", "negative_curves"};
  o.result["geometries"] = json::array();
  for (const auto& name : builtin_names()) {
    const SurfaceGeometry g = builtin_geometry(name);
    std::string basis;
    for (const auto& b : g.basis) basis += (basis.empty() ? "" : " ") + b;
    o.rows.push_back({name, std::to_string(g.rank()), basis, std::to_string(g.negative_curves.size())});
    o.result["geometries"].push_back({{"name", name}, {"rank", g.rank()}, {"basis", g.basis}});
  }
  o.result["toric_models"] = toric::builtin_toric_names();
  return o;
}

Output geom_show(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  Output o;
  o.result = save_geometry(g);
  std::string basis;
  for (const auto& b : g.basis) basis += (basis.empty() ? "" : " ") + b;
  o.summary = {{"name", g.name}, {"basis", basis}};
  o.header = {"row", "intersection"};
  for (std::size_t i = 0; i < g.rank(); ++i) {
    std::string row;
    for (auto v : g.intersection[i]) row += (row.empty() ? "" : " ") + std::to_string(v);
    o.rows.push_back({g.basis[i], row});
  }
  for (const auto& c : g.negative_curves) {
    o.summary.push_back({"curve", format_class(g, c) + " (self-intersection " +
                                      str(g.self_intersection(c)) + ")"});
  }
  if (g.nef_duals) {
    for (const auto& c : *g.nef_duals) o.summary.push_back({"nef_dual", format_class(g, c)});
  }
  return o;
}

Output geom_check(const Params& p) {
  Output o;
  if (p.geom.empty()) throw UsageError("--geom is required");
  try {
    const SurfaceGeometry g = resolve_geometry(p.geom);
    g.validate();
    o.result = {{"geometry", g.name}, {"valid", true}, {"has_nef_duals", g.nef_duals.has_value()}};
    o.summary = {{"geometry", g.name}, {"valid", "yes"}};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    o.result = {{"geometry", p.geom}, {"valid", false}, {"error", e.what()}};
    o.summary = {{"geometry", p.geom}, {"valid", "no"}, {"error", e.what()}};
    o.exit_code = 1;
  }
  return o;
}

Output zariski(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass d = required_class(g, p.cls, "--class");
  Output o;
  o.result["class"] = class_json(g, d);
  try {
    const ZariskiDecomposition z = zariski_decompose(g, d);
    json negative = json::array();
    o.summary = {{"class", format_class(g, d)}, {"positive", format_class(g, z.positive)}};
    o.header = {"curve", "coefficient"};
    for (const auto& [index, coeff] : z.negative_coeffs) {
      negative.push_back({{"curve", format_class(g, g.negative_curves[index])},
                          {"index", index},
                          {"coefficient", rational_json(coeff)}});
      o.rows.push_back({format_class(g, g.negative_curves[index]), str(coeff)});
    }
    const Rational volume = vol(g, d);
    o.result.update({{"pseudo_effective", true},
                     {"positive", class_json(g, z.positive)},
                     {"negative", negative},
                     {"nef", is_nef(g, d)},
                     {"big", volume > 0},
                     {"volume", rational_json(volume)}});
    o.summary.push_back({"negative", format_class(g, z.negative(g))});
    o.summary.push_back({"volume", str(volume)});
  } catch (const NotPseudoEffective& e) {
    o.result.update({{"pseudo_effective", false}, {"reason", e.what()}});
    o.summary = {{"class", format_class(g, d)}, {"", "not pseudo-effective"}, {"reason", e.what()}};
  }
  return o;
}

Output vol(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass d = required_class(g, p.cls, "--class");
  const Rational v = volcone::vol(g, d);
  Output o;
  o.result = {{"class", class_json(g, d)}, {"volume", rational_json(v)}};
  o.summary = {{"", str(v)}};
  return o;
}

Output grad(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass d = required_class(g, p.cls, "--class");
  const Covector c = grad_vol(g, d);
  Output o;
  o.result = {{"class", class_json(g, d)}, {"gradient", vector_json(c.coords)}};
  o.header = {"basis", "d/dx Vol"};
  for (std::size_t i = 0; i < g.rank(); ++i) o.rows.push_back({g.basis[i], str(c.coords[i])});
  return o;
}

Output profile(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass alpha = required_class(g, p.alpha, "--alpha");
  const DivisorClass beta = required_class(g, p.beta, "--beta");
  const std::vector<Rational> ts = grid(p);
  const SegmentProfile prof = segment_profile(g, alpha, beta, ts);
  Output o;
  o.result = {{"alpha", class_json(g, alpha)}, {"beta", class_json(g, beta)}};
  o.result["rows"] = json::array();
  o.header = {"t", "volume", "derivative", "chamber"};
  for (const auto& r : prof.rows) {
    json row = {{"t", rational_json(r.t)}, {"volume", rational_json(r.volume)}, {"chamber", r.chamber}};
    row["derivative"] = r.derivative ? rational_json(*r.derivative) : json(nullptr);
    o.result["rows"].push_back(row);
    o.rows.push_back({str(r.t), str(r.volume), r.derivative ? str(*r.derivative) : "",
                      std::to_string(r.chamber)});
  }
  return o;
}

Output chambers(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass alpha = required_class(g, p.alpha, "--alpha");
  const DivisorClass beta = required_class(g, p.beta, "--beta");
  const ChamberReport rep = chamber_scan(g, alpha, beta, parse_rational(p.t0), parse_rational(p.t1));
  Output o;
  json walls = json::array(), chambers = json::array(), matches = json::array();
  for (const auto& w : rep.walls) walls.push_back(rational_json(w));
  o.header = {"chamber", "t_begin", "t_end", "region", "support", "volume"};
  for (std::size_t i = 0; i < rep.chambers.size(); ++i) {
    const Chamber& c = rep.chambers[i];
    chambers.push_back({{"t_begin", rational_json(c.t_begin)},
                        {"t_end", rational_json(c.t_end)},
                        {"region", region_name(c.region)},
                        {"support", support_text(g, c.support)},
                        {"fitted", polynomial_json(c.fitted)},
                        {"analytic", polynomial_json(c.analytic)},
                        {"residual", rational_json(c.residual)}});
    o.rows.push_back({std::to_string(i), str(c.t_begin), str(c.t_end), region_name(c.region),
                      support_text(g, c.support), c.fitted.to_string()});
  }
  for (const auto& m : rep.matches) {
    matches.push_back({{"t", rational_json(m.t)},
                       {"value_match", m.value_match},
                       {"derivative_match", m.derivative_match},
                       {"interior_to_big_cone", m.interior_to_big_cone},
                       {"second_derivative_jump", rational_json(m.second_derivative_jump)}});
  }
  std::string wall_text;
  for (const auto& w : rep.walls) wall_text += (wall_text.empty() ? "" : " ") + str(w);
  o.summary = {{"walls", wall_text.empty() ? "-" : wall_text}};
  o.result = {{"alpha", class_json(g, alpha)}, {"beta", class_json(g, beta)},
              {"t0", rational_json(rep.t_begin)}, {"t1", rational_json(rep.t_end)},
              {"walls", walls}, {"chambers", chambers}, {"matches", matches}};
  return o;
}

namespace {

struct ToricInput {
  toric::ToricSurface surface;
  RationalVector coeffs;
  std::optional<SurfaceGeometry> g;
  std::optional<DivisorClass> d;
};

ToricInput toric_input(const Params& p) {
  if (p.toric.empty()) throw UsageError("--toric is required");
  ToricInput in{toric::builtin_toric(p.toric), {}, std::nullopt, std::nullopt};
  in.g = builtin_geometry(in.surface.geometry_name);
  if (!p.coeffs.empty()) {
    in.coeffs = parse_coords(p.coeffs);
    if (in.coeffs.size() != in.surface.ray_count()) {
      throw UsageError("--coeffs needs one coefficient per ray (" +
                       std::to_string(in.surface.ray_count()) + ")");
    }
    in.d = in.g->make_class(in.surface.to_class_coords(in.coeffs));
  } else if (!p.cls.empty()) {
    in.d = parse_class(p.cls, *in.g);
    in.coeffs = in.surface.coefficients_for(in.d->coords());
  } else {
    throw UsageError("pass --coeffs or --class");
  }
  return in;
}

}  // namespace

Output oracle_count(const Params& p) {
  const ToricInput in = toric_input(p);
  if (p.m == 0) throw UsageError("--m must be positive");
  const std::uint64_t count = toric::count_sections(in.surface, in.coeffs, static_cast<std::int64_t>(p.m));
  Output o;
  o.result = {{"toric", in.surface.name},
              {"coeffs", vector_json(in.coeffs)},
              {"class", class_json(*in.g, *in.d)},
              {"m", p.m},
              {"count", count}};
  o.summary = {{"class", format_class(*in.g, *in.d)}, {"m", std::to_string(p.m)},
               {"count", std::to_string(count)}};
  return o;
}

Output oracle_volume(const Params& p) {
  const ToricInput in = toric_input(p);
  const Rational exact = toric::volume_exact(in.surface, in.coeffs);
  const Rational zariski_vol = volcone::vol(*in.g, *in.d);
  const toric::EmpiricalVolume emp =
      toric::volume_empirical(in.surface, in.coeffs, static_cast<std::int64_t>(p.m));
  Output o;
  o.result = {{"toric", in.surface.name},
              {"coeffs", vector_json(in.coeffs)},
              {"class", class_json(*in.g, *in.d)},
              {"polytope_volume", rational_json(exact)},
              {"zariski_volume", rational_json(zariski_vol)},
              {"agree", exact == zariski_vol},
              {"empirical", {{"m", emp.m},
                             {"at_m", round12(emp.at_m)},
                             {"at_half_m", round12(emp.at_half_m)},
                             {"richardson", round12(emp.richardson)}}}};
  o.summary = {{"class", format_class(*in.g, *in.d)},
               {"polytope_volume", str(exact)},
               {"zariski_volume", str(zariski_vol)},
               {"agree", exact == zariski_vol ? "yes" : "no"},
               {"empirical (m=" + std::to_string(emp.m) + ")", json(round12(emp.richardson)).dump()}};
  o.exit_code = exact == zariski_vol ? 0 : 1;
  return o;
}

Output probe_concavity(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  probe::ClassFunction fn;
  std::string label;
  Rational exponent;
  if (p.fn == "vol") {
    fn = [&g](const DivisorClass& d) { return volcone::vol(g, d); };
    label = "vol";
    exponent = Rational(1, 2);
  } else if (p.fn.starts_with("positive:")) {
    const DivisorClass omega = parse_class(p.fn.substr(9), g);
    fn = probe::positive_product_against(g, omega);
    label = "positive product with " + format_class(g, omega);
    exponent = 1;
  } else {
    throw UsageError("--fn must be vol or positive:<class>");
  }
  if (!p.exponent.empty()) exponent = parse_rational(p.exponent);
  const Box box = p.box.empty() ? probe::default_region(g) : parse_box(p.box);
  return from_probe(probe::concavity_check(g, fn, label, exponent, box, {p.samples, p.seed, p.threads}));
}

Output probe_kt(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const Box box = p.box.empty() ? probe::default_region(g) : parse_box(p.box);
  return from_probe(probe::kt_probe(g, box, {p.samples, p.seed, p.threads}));
}

Output probe_hessian(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass alpha = required_class(g, p.alpha, "--alpha");
  const DivisorClass beta = required_class(g, p.beta, "--beta");
  std::vector<DivisorClass> points;
  for (const auto& t : grid(p)) points.push_back(alpha + t * beta);
  const Rational step = parse_rational(p.step);
  Output o;
  if (!p.d1.empty() || !p.d2.empty()) {
    const DivisorClass d1 = required_class(g, p.d1, "--d1");
    const DivisorClass d2 = required_class(g, p.d2, "--d2");
    o = from_probe(probe::hessian_probe(g, points, d1, d2, step));
  } else {
    o = from_probe(probe::hessian_sup(g, points, step));
  }
  if (auto bound = optional_double(p.bound)) {
    o.result["bound"] = *bound;
    if (o.result["statistic"].get<double>() > *bound) {
      o.result["passed"] = false;
      o.summary.push_back({"bound", "exceeded"});
      o.exit_code = 1;
    }
  }
  return o;
}

Output probe_lipschitz(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const Box box = p.box.empty() ? probe::default_region(g) : parse_box(p.box);
  return from_probe(probe::lipschitz_gradient_estimate(g, box, {p.samples, p.seed, p.threads},
                                                       optional_double(p.bound)));
}

Output probe_boundary(const Params& p) {
  const SurfaceGeometry g = geometry(p);
  const DivisorClass alpha = required_class(g, p.cls, "--class");
  std::vector<DivisorClass> dirs;
  for (const auto& d : p.dirs) dirs.push_back(parse_class(d, g));
  return from_probe(probe::boundary_lipschitz_probe(g, alpha, dirs, parse_rational(p.radius),
                                                    {p.samples, p.seed, p.threads},
                                                    optional_double(p.bound)));
}

Output lipschitz_certify(const Params& p) {
  const ConeSetup s = cone_setup(p);
  const cone::AxiomReport axioms = cone::verify_axioms(s.f, s.cone_box, p.samples, p.seed, p.threads);
  const cone::LipschitzCertificate cert = cone::lipschitz_certificate(
      s.f, s.center, parse_rational(p.eps), s.basis, optional_double(p.sup), p.sup_samples, p.seed);
  Output o;
  o.result = {{"function", s.f.label},
              {"degree", rational_json(s.f.degree)},
              {"axioms", axioms_json(axioms)},
              {"certificate", certificate_json(cert)}};
  o.summary = {{"function", s.f.label},
               {"axioms", axioms.passed() ? "pass" : "fail"},
               {"sup_U", json(cert.sup_u).dump()},
               {"L", json(cert.constant).dump()},
               {"valid_radius", str(cert.valid_radius)}};
  o.exit_code = axioms.passed() ? 0 : 1;
  return o;
}

Output lipschitz_fuzz(const Params& p) {
  const ConeSetup s = cone_setup(p);
  const cone::LipschitzCertificate cert = cone::lipschitz_certificate(
      s.f, s.center, parse_rational(p.eps), s.basis, optional_double(p.sup), p.sup_samples, p.seed);
  const cone::EmpiricalLipschitz emp = cone::empirical_lipschitz(s.f, cert, p.pairs, p.seed, p.threads);
  const cone::ChainReport chain = cone::chain_check(s.f, cert, s.cone_box, p.chain, p.seed);
  const bool within = emp.max_quotient <= cert.constant;
  json witness = json::array();
  for (const auto& w : emp.witness) witness.push_back(vector_json(w));
  json chain_witness = json::array();
  for (const auto& w : chain.witness) chain_witness.push_back(vector_json(w));
  Output o;
  o.result = {{"function", s.f.label},
              {"certificate", certificate_json(cert)},
              {"empirical", {{"max_quotient", emp.max_quotient},
                             {"pairs", emp.pairs},
                             {"skipped", emp.skipped},
                             {"witness", witness},
                             {"within_certificate", within}}},
              {"chain", {{"samples", chain.samples},
                         {"lower_violations", chain.lower_violations},
                         {"upper_violations", chain.upper_violations},
                         {"worst_margin", chain.worst_margin},
                         {"witness", chain_witness},
                         {"passed", chain.passed()}}}};
  o.summary = {{"function", s.f.label},
               {"L", json(cert.constant).dump()},
               {"max_quotient", json(emp.max_quotient).dump()},
               {"pairs", std::to_string(emp.pairs)},
               {"within_certificate", within ? "yes" : "no"},
               {"chain", chain.passed() ? "pass" : "fail"}};
  o.exit_code = within && chain.passed() ? 0 : 1;
  return o;
}

Output wolfe_calibrate(const Params& p) {
  auto base = bundle::make_base(p.base);
  const DivisorClass a = base_class(*base, p.a);
  std::vector<DivisorClass> classes;
  if (p.classes.empty()) {
    classes = bundle::default_calibration_classes(*base);
  } else {
    for (const auto& item : split(p.classes, ';')) classes.push_back(base_class(*base, item));
  }
  const bundle::Calibration cal = bundle::calibrate(*base, a, classes);
  Output o;
  json rows = json::array();
  o.header = {"E", "integral", "direct", "ratio"};
  for (const auto& r : cal.rows) {
    rows.push_back({{"E", vector_json(r.e.coords())},
                    {"integral", rational_json(r.integral)},
                    {"direct", rational_json(r.direct)},
                    {"ratio", r.ratio ? rational_json(*r.ratio) : json(nullptr)}});
    o.rows.push_back({to_string(r.e.coords()), str(r.integral), str(r.direct),
                      r.ratio ? str(*r.ratio) : "-"});
  }
  o.result = {{"base", base->name()}, {"A", vector_json(a.coords())},
              {"kappa", rational_json(cal.kappa)}, {"rows", rows}};
  o.summary = {{"base", base->name()}, {"kappa", str(cal.kappa)}};
  return o;
}

Output wolfe_vol(const Params& p) {
  const bundle::BundleModel m = model(p);
  const DivisorClass e = base_class(*m.base, p.e);
  const bundle::QuadratureResult q = bundle::wolfe_vol(m, e);
  Output o;
  o.result = {{"model", model_json(m)}, {"E", vector_json(e.coords())}, {"volume", quadrature_json(q)}};
  o.summary = {{"kappa", str(m.kappa) + (m.calibrated ? " (calibrated)" : " (uncalibrated)")},
               {"volume", quadrature_text(q)}};
  return o;
}

Output wolfe_segment(const Params& p) {
  const bundle::BundleModel m = model(p);
  Output o;
  o.result["model"] = model_json(m);
  o.summary = {{"kappa", str(m.kappa) + (m.calibrated ? " (calibrated)" : " (uncalibrated)")},
               {"direction", p.minus ? "alpha - t omega" : "alpha + t omega"}};
  const bool curve = m.dimension() == 1;

  if (!p.t.empty()) {
    const Rational t = parse_rational(p.t);
    const bundle::QuadratureResult q = p.minus ? bundle::segment_minus(m, t) : bundle::segment_plus(m, t);
    const Rational deriv = p.minus ? bundle::segment_minus_derivative(m, t)
                                   : bundle::segment_plus_derivative(m, t);
    o.result.update({{"t", rational_json(t)}, {"volume", quadrature_json(q)},
                     {"derivative", rational_json(deriv)}});
    o.summary.push_back({"volume", quadrature_text(q)});
    o.summary.push_back({"derivative", str(deriv)});
    if (curve && !p.minus) {
      const Rational direct = bundle::direct_segment_volume(m, t);
      o.result["direct_volume"] = rational_json(direct);
      o.summary.push_back({"direct_volume", str(direct)});
    }
    return o;
  }

  if (p.minus) {
    json rows = json::array();
    o.header = {"t", "volume", "derivative"};
    for (const auto& t : grid(p)) {
      const bundle::QuadratureResult q = bundle::segment_minus(m, t);
      const Rational deriv = bundle::segment_minus_derivative(m, t);
      rows.push_back({{"t", rational_json(t)}, {"volume", quadrature_json(q)},
                      {"derivative", rational_json(deriv)}});
      o.rows.push_back({str(t), quadrature_text(q), str(deriv)});
    }
    o.result["rows"] = rows;
    return o;
  }

  const bundle::TransferReport rep = bundle::transfer_regularity_report(
      m, parse_rational(p.t0), parse_rational(p.t1), p.steps);
  json rows = json::array(), events = json::array(), walls = json::array();
  o.header = {"t", "volume", "derivative", "second_derivative"};
  for (const auto& r : rep.rows) {
    rows.push_back({{"t", rational_json(r.t)},
                    {"volume", quadrature_json(r.value)},
                    {"derivative", rational_json(r.derivative)},
                    {"second_derivative", round12(r.second_derivative)}});
    o.rows.push_back({str(r.t), quadrature_text(r.value), str(r.derivative),
                      json(round12(r.second_derivative)).dump()});
  }
  for (const auto& w : rep.base_walls) walls.push_back(rational_json(w));
  for (const auto& e : rep.events) {
    events.push_back({{"base_u", rational_json(e.base_u)},
                      {"t", rational_json(e.t)},
                      {"endpoint", e.endpoint},
                      {"base_order", e.base_order ? json(*e.base_order) : json(nullptr)},
                      {"bundle_order", e.bundle_order ? json(*e.bundle_order) : json(nullptr)},
                      {"interior", e.interior}});
    o.summary.push_back({"wall event",
                         "t = " + str(e.t) + " (" + e.endpoint + " endpoint at u = " + str(e.base_u) +
                             "), base C^" + (e.base_order ? std::to_string(*e.base_order) : "inf") +
                             ", bundle C^" +
                             (e.bundle_order ? std::to_string(*e.bundle_order) : "inf")});
  }
  o.result.update({{"rows", rows}, {"events", events}, {"base_walls", walls}});
  return o;
}

}  // namespace volcone::cli
