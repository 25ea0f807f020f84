#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "volcone/rational.hpp"

namespace volcone {

/// Dense univariate polynomial with exact coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(RationalVector coeffs);

  /// Newton interpolation through (xs[i], ys[i]); the xs must be distinct.
  static Polynomial interpolate(std::span<const Rational> xs, std::span<const Rational> ys);

  const RationalVector& coeffs() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  Rational operator()(const Rational& x) const;
  Polynomial derivative() const;
  /// k-th derivative evaluated at x.
  Rational derivative_at(const Rational& x, int k) const;

  std::string to_string(const std::string& var = "t") const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  RationalVector coeffs_;
};

}  // namespace volcone
