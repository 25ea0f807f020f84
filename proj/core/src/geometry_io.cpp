#include "volcone/geometry_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "volcone/error.hpp"

namespace volcone {

namespace {

using nlohmann::json;

Rational rational_from_json(const json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": rationals must be integers or \"p/q\" strings");
}

json rational_to_json(const Rational& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return json(r.get_num().get_si());
  return json(to_string(r));
}

std::vector<DivisorClass> classes_from_json(const SurfaceGeometry& g, const json& list,
                                            const std::string& field) {
  if (!list.is_array()) throw SchemaError("'" + field + "' must be an array");
  std::vector<DivisorClass> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const json& entry = list[k];
    std::string where = field + "[" + std::to_string(k) + "]";
    if (!entry.is_array() || entry.size() != g.rank()) {
      throw SchemaError(where + " must be an array of " + std::to_string(g.rank()) + " rationals");
    }
    RationalVector coords;
    for (std::size_t i = 0; i < entry.size(); ++i) {
      coords.push_back(rational_from_json(entry[i], where + "[" + std::to_string(i) + "]"));
    }
    out.push_back(g.make_class(std::move(coords)));
  }
  return out;
}

json classes_to_json(const std::vector<DivisorClass>& classes) {
  json out = json::array();
  for (const auto& c : classes) {
    json row = json::array();
    for (const auto& x : c.coords()) row.push_back(rational_to_json(x));
    out.push_back(row);
  }
  return out;
}

const json& require_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

SurfaceGeometry load_geometry(const json& document) {
  if (!document.is_object()) throw SchemaError("geometry document must be a JSON object");
  SurfaceGeometry g;

  const json& name = require_field(document, "name");
  if (!name.is_string()) throw SchemaError("'name' must be a string");
  g.name = name.get<std::string>();

  const json& rank = require_field(document, "rank");
  if (!rank.is_number_integer() || rank.get<long>() <= 0) {
    throw SchemaError("'rank' must be a positive integer");
  }
  const auto rho = static_cast<std::size_t>(rank.get<long>());

  const json& basis = require_field(document, "basis");
  if (!basis.is_array() || basis.size() != rho) {
    throw SchemaError("'basis' must be an array of " + std::to_string(rho) + " strings");
  }
  for (const auto& label : basis) {
    if (!label.is_string() || label.get<std::string>().empty()) {
      throw SchemaError("'basis' entries must be non-empty strings");
    }
    g.basis.push_back(label.get<std::string>());
  }

  const json& q = require_field(document, "intersection");
  if (!q.is_array() || q.size() != rho) {
    throw SchemaError("'intersection' must be a " + std::to_string(rho) + "x" +
                      std::to_string(rho) + " array");
  }
  for (const auto& row : q) {
    if (!row.is_array() || row.size() != rho) {
      throw SchemaError("'intersection' must be a " + std::to_string(rho) + "x" +
                        std::to_string(rho) + " array");
    }
    std::vector<std::int64_t> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw SchemaError("'intersection' entries must be integers");
      r.push_back(x.get<std::int64_t>());
    }
    g.intersection.push_back(std::move(r));
  }

  g.negative_curves = classes_from_json(g, require_field(document, "negative_curves"),
                                        "negative_curves");
  if (auto it = document.find("nef_duals"); it != document.end() && !it->is_null()) {
    g.nef_duals = classes_from_json(g, *it, "nef_duals");
  }
  if (auto it = document.find("curves_irreducible"); it != document.end()) {
    if (!it->is_boolean()) throw SchemaError("'curves_irreducible' must be a boolean");
    g.curves_irreducible = it->get<bool>();
  }

  g.validate();
  return g;
}

json save_geometry(const SurfaceGeometry& g) {
  json doc;
  doc["name"] = g.name;
  doc["rank"] = g.rank();
  doc["basis"] = g.basis;
  doc["intersection"] = g.intersection;
  doc["negative_curves"] = classes_to_json(g.negative_curves);
  if (g.nef_duals) doc["nef_duals"] = classes_to_json(*g.nef_duals);
  doc["curves_irreducible"] = g.curves_irreducible;
  return doc;
}

SurfaceGeometry load_geometry_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open geometry file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError("geometry file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return load_geometry(doc);
}

void save_geometry_file(const SurfaceGeometry& geometry, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write geometry file '" + path.string() + "'");
  out << save_geometry(geometry).dump(2) << '\n';
}

SurfaceGeometry resolve_geometry(std::string_view source) {
  namespace fs = std::filesystem;
  std::string text(source);
  fs::path direct(text);
  std::error_code ec;
  if (fs::is_regular_file(direct, ec)) return load_geometry_file(direct);

  if (const char* search = std::getenv("VOLCONE_GEOM_PATH"); search != nullptr) {
    std::stringstream dirs(search);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      if (dir.empty()) continue;
      for (const fs::path& candidate : {fs::path(dir) / text, fs::path(dir) / (text + ".json")}) {
        if (fs::is_regular_file(candidate, ec)) return load_geometry_file(candidate);
      }
    }
  }
  return builtin_geometry(source);
}

}  // namespace volcone
