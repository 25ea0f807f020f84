#include "volcone/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace volcone {

double round12(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

nlohmann::json rational_json(const Rational& value) {
  return {{"exact", to_string(value)}, {"decimal", std::strtod(to_decimal(value).c_str(), nullptr)}};
}

nlohmann::json vector_json(const RationalVector& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

std::string format_class(const SurfaceGeometry& geometry, const DivisorClass& d) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Rational& c = d[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) {
      std::string s = to_string(mag);
      out << (mag.get_den() != 1 ? "(" + s + ")" : s);
    }
    out << geometry.basis[i];
  }
  if (first) out << '0';
  return out.str();
}

nlohmann::json class_json(const SurfaceGeometry& geometry, const DivisorClass& d) {
  return {{"expr", format_class(geometry, d)}, {"coords", vector_json(d.coords())}};
}

nlohmann::json polynomial_json(const Polynomial& p) {
  return {{"coeffs", vector_json(p.coeffs())}, {"text", p.to_string()}};
}

}  // namespace volcone
