#include "volcone/polynomial.hpp"

#include <sstream>

#include "volcone/error.hpp"

namespace volcone {

Polynomial::Polynomial(RationalVector coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::interpolate(std::span<const Rational> xs, std::span<const Rational> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw DomainError("interpolation needs matching, non-empty sample lists");
  }
  const std::size_t n = xs.size();
  RationalVector table(ys.begin(), ys.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      const Rational dx = xs[i] - xs[i - level];
      if (dx == 0) throw DomainError("interpolation nodes must be distinct");
      table[i] = (table[i] - table[i - 1]) / dx;
    }
  }
  // Horner expansion of the Newton form, innermost first.
  RationalVector coeffs{table[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    RationalVector next(coeffs.size() + 1, Rational(0));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j + 1] += coeffs[j];
      next[j] -= coeffs[j] * xs[k];
    }
    next[0] += table[k];
    coeffs = std::move(next);
  }
  return Polynomial(std::move(coeffs));
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  RationalVector d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

Rational Polynomial::derivative_at(const Rational& x, int k) const {
  Polynomial p = *this;
  for (int i = 0; i < k; ++i) p = p.derivative();
  return p(x);
}

std::string Polynomial::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational mag = volcone::abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) out << volcone::to_string(mag);
    if (i >= 1) out << var;
    if (i >= 2) out << '^' << i;
  }
  return out.str();
}

}  // namespace volcone
