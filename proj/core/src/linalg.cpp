#include "volcone/linalg.hpp"

#include <utility>

#include "volcone/error.hpp"

namespace volcone {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector size mismatch");
  RationalVector out(rows_, Rational(0));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  }
  return out;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

std::optional<RationalVector> solve(RationalMatrix a, RationalVector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DomainError("solve requires a square system");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Rational factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  RationalVector x(n, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
    x[i] = acc / a(i, i);
  }
  return x;
}

std::size_t rank(RationalMatrix a) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(r, c));
    for (std::size_t row = r + 1; row < a.rows(); ++row) {
      if (a(row, col) == 0) continue;
      Rational factor = a(row, col) / a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(row, c) -= factor * a(r, c);
    }
    ++r;
  }
  return r;
}

Inertia inertia(RationalMatrix m) {
  if (!m.is_symmetric()) throw DomainError("inertia requires a symmetric matrix");
  const std::size_t n = m.rows();
  Inertia out;
  auto swap_index = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(m(i, c), m(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(m(r, i), m(r, j));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m(pivot, pivot) == 0) ++pivot;
    if (pivot == n) {
      // All remaining diagonal entries vanish; fold an off-diagonal entry
      // onto the diagonal with the congruence row_i += row_j, col_i += col_j.
      std::size_t oi = n, oj = n;
      for (std::size_t i = k; i < n && oi == n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (m(i, j) != 0) {
            oi = i;
            oj = j;
            break;
          }
        }
      }
      if (oi == n) {
        out.zero += n - k;
        return out;
      }
      for (std::size_t c = 0; c < n; ++c) m(oi, c) += m(oj, c);
      for (std::size_t r = 0; r < n; ++r) m(r, oi) += m(r, oj);
      pivot = oi;
    }
    swap_index(k, pivot);
    const Rational d = m(k, k);
    (d > 0 ? out.positive : out.negative) += 1;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (m(r, k) == 0) continue;
      Rational factor = m(r, k) / d;
      for (std::size_t c = k; c < n; ++c) m(r, c) -= factor * m(k, c);
    }
    for (std::size_t c = k + 1; c < n; ++c) m(k, c) = 0;
    for (std::size_t r = k + 1; r < n; ++r) m(r, k) = 0;
  }
  return out;
}

bool is_negative_definite(const RationalMatrix& symmetric) {
  Inertia in = inertia(symmetric);
  return in.negative == symmetric.rows();
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DomainError("dot product size mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace volcone
