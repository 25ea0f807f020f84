#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "volcone/rational.hpp"

namespace volcone {

/// Dense row-major matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  RationalVector operator*(const RationalVector& v) const;
  bool is_symmetric() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Solves A x = b by exact Gaussian elimination. Returns nullopt when A is singular.
std::optional<RationalVector> solve(RationalMatrix a, RationalVector b);

std::size_t rank(RationalMatrix a);

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Sylvester inertia via exact symmetric (congruence) elimination.
/// Throws DomainError if the matrix is not symmetric.
Inertia inertia(RationalMatrix symmetric);

bool is_negative_definite(const RationalMatrix& symmetric);

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace volcone
