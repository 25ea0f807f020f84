#pragma once

#include <nlohmann/json.hpp>

#include "volcone/lattice.hpp"
#include "volcone/polynomial.hpp"
#include "volcone/rational.hpp"

namespace volcone {

/// {"exact": "p/q", "decimal": <12 significant digits>}
nlohmann::json rational_json(const Rational& value);
nlohmann::json vector_json(const RationalVector& values);
nlohmann::json class_json(const SurfaceGeometry& geometry, const DivisorClass& d);
nlohmann::json polynomial_json(const Polynomial& p);

/// Human-readable "2H - E" style rendering.
std::string format_class(const SurfaceGeometry& geometry, const DivisorClass& d);

/// Double rounded to 12 significant digits, for deterministic report numbers.
double round12(double value);

}  // namespace volcone
