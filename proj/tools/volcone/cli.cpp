#include "volcone/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "volcone/commands.hpp"
#include "volcone/error.hpp"
#include "volcone/sampling.hpp"
#include "volcone/version.hpp"

namespace volcone::cli {

namespace {

using nlohmann::json;
using Handler = std::function<Output(const Params&)>;

std::string timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
  out << '\n';
}

void write_table(std::ostream& out, const Output& o) {
  for (const auto& [key, value] : o.summary) {
    if (key.empty()) {
      out << value << '\n';
    } else {
      out << key << ": " << value << '\n';
    }
  }
  if (o.header.empty()) return;
  if (!o.summary.empty()) out << '\n';
  std::vector<std::size_t> width(o.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  };
  measure(o.header);
  for (const auto& r : o.rows) measure(r);
  auto print = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      if (i + 1 < row.size()) cell.resize(width[i], ' ');
      line += (i ? "  " : "") + cell;
    }
    out << line << '\n';
  };
  print(o.header);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  print(rule);
  for (const auto& r : o.rows) print(r);
}

void write_output(std::ostream& out, const std::string& format, const json& envelope,
                  const Output& o) {
  if (format == "json") {
    out << envelope.dump(2) << '\n';
  } else if (format == "csv") {
    if (!o.header.empty()) {
      write_csv_row(out, o.header);
      for (const auto& r : o.rows) write_csv_row(out, r);
    } else {
      write_csv_row(out, {"key", "value"});
      for (const auto& [k, v] : o.summary) write_csv_row(out, {k.empty() ? "value" : k, v});
    }
  } else {
    write_table(out, o);
  }
}

// Every option of the invoked command chain, with given or default values.
json config_json(const CLI::App& app) {
  json config = json::object();
  std::string path;
  const CLI::App* node = &app;
  while (node) {
    for (const CLI::Option* opt : node->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string key = opt->get_lnames().front();
      if (key == "help" || key == "version") continue;
      if (opt->get_expected_min() == 0) {
        config[key] = opt->count() > 0;
      } else if (opt->get_items_expected_max() > 1) {
        config[key] = opt->results();
      } else if (opt->count() > 0) {
        config[key] = opt->results().front();
      } else {
        config[key] = opt->get_default_str();
      }
    }
    auto subs = node->get_subcommands();
    node = subs.empty() ? nullptr : subs.front();
    if (node) path += (path.empty() ? "" : " ") + node->get_name();
  }
  config["subcommand"] = path;
  return config;
}

struct Registry {
  std::map<const CLI::App*, Handler> handlers;
};

template <typename T>
CLI::Option* opt(CLI::App* sub, const std::string& name, T& field, const std::string& desc) {
  return sub->add_option(name, field, desc)->capture_default_str();
}

void geometry_option(CLI::App* sub, Params& p) {
  opt(sub, "--geom", p.geom, "builtin geometry name or geometry file");
}

void build(CLI::App& app, Params& p, Registry& reg) {
  app.require_subcommand(1);

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                  Handler h) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    reg.handlers[sub] = std::move(h);
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->require_subcommand(1);
    sub->fallthrough();
    return sub;
  };

  CLI::App* geom = group("geom", "inspect surface geometries");
  leaf(geom, "list", "list builtin geometries", geom_list);
  geometry_option(leaf(geom, "show", "print a geometry", geom_show), p);
  geometry_option(leaf(geom, "check", "validate a geometry", geom_check), p);

  CLI::App* z = leaf(&app, "zariski", "Zariski decomposition of a class", zariski);
  geometry_option(z, p);
  opt(z, "--class", p.cls, "class expression, e.g. 2H-E");

  CLI::App* v = leaf(&app, "vol", "volume of a class", vol);
  geometry_option(v, p);
  opt(v, "--class", p.cls, "class expression");

  CLI::App* g = leaf(&app, "grad", "gradient of the volume at a big class", grad);
  geometry_option(g, p);
  opt(g, "--class", p.cls, "class expression");

  for (auto [name, handler, desc] :
       {std::tuple{"profile", Handler(profile), "t -> Vol(alpha + t beta) on a grid"},
        std::tuple{"chambers", Handler(chambers), "exact chamber decomposition of a segment"}}) {
    CLI::App* s = leaf(&app, name, desc, handler);
    geometry_option(s, p);
    opt(s, "--alpha", p.alpha, "base class");
    opt(s, "--beta", p.beta, "direction class");
    opt(s, "--t0", p.t0, "segment start");
    opt(s, "--t1", p.t1, "segment end");
    if (std::string(name) == "profile") opt(s, "--steps", p.steps, "grid intervals");
  }

  CLI::App* oracle = group("oracle", "toric lattice-point oracle");
  for (auto [name, handler, desc] :
       {std::tuple{"count", Handler(oracle_count), "count sections of m D"},
        std::tuple{"volume", Handler(oracle_volume), "polytope volume vs Zariski volume"}}) {
    CLI::App* s = leaf(oracle, name, desc, handler);
    opt(s, "--toric", p.toric, "toric model name");
    opt(s, "--coeffs", p.coeffs, "torus-invariant divisor coefficients, one per ray");
    opt(s, "--class", p.cls, "class expression on the model's geometry");
    opt(s, "--m", p.m, "multiple (count) or largest multiple (volume)");
  }

  CLI::App* probe = group("probe", "sampling probes of volume regularity");
  CLI::App* conc = leaf(probe, "concavity", "concavity of Vol^(1/2) or a positive product", probe_concavity);
  geometry_option(conc, p);
  opt(conc, "--fn", p.fn, "vol or positive:<class>");
  opt(conc, "--exponent", p.exponent, "1/2 or 1");
  opt(conc, "--box", p.box, "sampling box lo:hi,lo:hi,...");
  opt(conc, "--samples", p.samples, "number of segments");

  CLI::App* kt = leaf(probe, "kt", "Khovanskii-Teissier inequality on nef pairs", probe_kt);
  geometry_option(kt, p);
  opt(kt, "--box", p.box, "sampling box");
  opt(kt, "--samples", p.samples, "number of pairs");

  CLI::App* hess = leaf(probe, "hessian", "finite-difference Hessian along a segment", probe_hessian);
  geometry_option(hess, p);
  opt(hess, "--alpha", p.alpha, "segment base");
  opt(hess, "--beta", p.beta, "segment direction");
  opt(hess, "--t0", p.t0, "segment start");
  opt(hess, "--t1", p.t1, "segment end");
  opt(hess, "--steps", p.steps, "grid intervals");
  opt(hess, "--d1", p.d1, "first difference direction");
  opt(hess, "--d2", p.d2, "second difference direction");
  opt(hess, "--step", p.step, "finite-difference step");
  opt(hess, "--bound", p.bound, "fail when the sup exceeds this");

  CLI::App* lip = leaf(probe, "lipschitz", "gradient Lipschitz quotient on a box", probe_lipschitz);
  geometry_option(lip, p);
  opt(lip, "--box", p.box, "box inside the big cone");
  opt(lip, "--samples", p.samples, "number of pairs");
  opt(lip, "--bound", p.bound, "pass bound (default: chamber-derived)");

  CLI::App* bnd = leaf(probe, "boundary", "difference quotients at a boundary class", probe_boundary);
  geometry_option(bnd, p);
  opt(bnd, "--class", p.cls, "boundary class");
  opt(bnd, "--radius", p.radius, "l1 radius");
  opt(bnd, "--samples", p.samples, "number of perturbations");
  opt(bnd, "--bound", p.bound, "pass bound");
  bnd->add_option("--dir", p.dirs, "direction for one-sided derivatives (repeatable)");

  CLI::App* lgroup = group("lipschitz", "local Lipschitz certificates on cones");
  for (auto [name, handler, desc] :
       {std::tuple{"certify", Handler(lipschitz_certify), "check axioms and build a certificate"},
        std::tuple{"fuzz", Handler(lipschitz_fuzz), "sample quotients against a certificate"}}) {
    CLI::App* s = leaf(lgroup, name, desc, handler);
    opt(s, "--fn", p.fn, "vol, monomial:a,b, linear:w1,...,wn or difference");
    geometry_option(s, p);
    opt(s, "--center", p.center, "ball center");
    opt(s, "--eps", p.eps, "ball radius");
    opt(s, "--basis", p.basis, "basis vectors separated by ';'");
    opt(s, "--sup", p.sup, "known sup of f on the ball");
    opt(s, "--sup-samples", p.sup_samples, "samples for the sup estimate");
    opt(s, "--cone-box", p.cone_box, "box for cone samples");
    if (std::string(name) == "certify") {
      opt(s, "--samples", p.samples, "axiom samples");
    } else {
      opt(s, "--pairs", p.pairs, "quotient pairs");
      opt(s, "--chain", p.chain, "chain-inequality samples");
    }
  }

  CLI::App* wolfe = group("wolfe", "volumes on P^1-bundles");
  CLI::App* cal = leaf(wolfe, "calibrate", "fit the normalization constant", wolfe_calibrate);
  opt(cal, "--base", p.base, "p1 or a surface geometry");
  opt(cal, "--A", p.a, "ample class on the base");
  opt(cal, "--classes", p.classes, "test classes separated by ';'");
  CLI::App* wv = leaf(wolfe, "vol", "total-space volume of xi + pi^*E", wolfe_vol);
  opt(wv, "--base", p.base, "p1 or a surface geometry");
  opt(wv, "--A", p.a, "ample class on the base");
  opt(wv, "--E", p.e, "base class E");
  opt(wv, "--kappa", p.kappa, "override the normalization constant");
  CLI::App* ws = leaf(wolfe, "segment", "Vol(alpha +- t omega) and its derivative", wolfe_segment);
  opt(ws, "--base", p.base, "p1 or a surface geometry");
  opt(ws, "--A", p.a, "ample class on the base");
  opt(ws, "--D", p.d, "base class D");
  opt(ws, "--kappa", p.kappa, "override the normalization constant");
  opt(ws, "--t", p.t, "single parameter value");
  opt(ws, "--t0", p.t0, "grid start");
  opt(ws, "--t1", p.t1, "grid end");
  opt(ws, "--steps", p.steps, "grid intervals");
  ws->add_flag("--minus", p.minus, "use alpha - t omega");
}

bool is_usage_error(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
         dynamic_cast<const GeometryMismatch*>(&e) || dynamic_cast<const DomainError*>(&e) ||
         dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const CapabilityError*>(&e) ||
         dynamic_cast<const SignatureError*>(&e);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  p.threads = default_threads();
  std::string format = "table";
  std::string out_path;

  CLI::App app{"Volumes of divisor classes on surfaces and their regularity", "volcone"};
  app.set_version_flag("--version", std::string(kVersion));
  Registry reg;
  app.add_option("--format", format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write the report to this file");
  app.add_option("--seed", p.seed, "random seed")->capture_default_str();
  app.add_option("--threads", p.threads, "worker threads")->capture_default_str();
  build(app, p, reg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  auto it = reg.handlers.find(leaf);
  if (it == reg.handlers.end()) {
    err << "error: incomplete command\n";
    return kUsage;
  }
  if (p.threads == 0) p.threads = 1;

  try {
    const Output o = it->second(p);
    json envelope = {{"tool", "volcone"},
                     {"version", std::string(kVersion)},
                     {"config", config_json(app)},
                     {"timestamp", timestamp()},
                     {"exit_code", o.exit_code},
                     {"result", o.result}};
    if (out_path.empty()) {
      write_output(out, format, envelope, o);
    } else {
      std::ofstream file(out_path);
      if (!file) {
        err << "error: cannot write " << out_path << '\n';
        return kUsage;
      }
      write_output(file, format, envelope, o);
    }
    return o.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage_error(e) ? kUsage : kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  }
}

}  // namespace volcone::cli
