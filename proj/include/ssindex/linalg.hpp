#pragma once

#include <stdexcept>
#include <vector>

#include "ssindex/rational.hpp"

namespace ssindex {

// Dense exact-rational matrices, sized for small spans (dimensions <= ~20).
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

inline RatMat mat_zero(std::size_t rows, std::size_t cols) {
  return RatMat(rows, RatVec(cols, Rational(0)));
}

inline RatMat mat_identity(std::size_t n) {
  RatMat m = mat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RatMat mat_transpose(const RatMat& a) {
  if (a.empty()) return {};
  RatMat t = mat_zero(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline RatMat mat_mul(const RatMat& a, const RatMat& b) {
  if (a.empty() || b.empty()) return {};
  if (a[0].size() != b.size()) throw std::invalid_argument("matrix dimension mismatch");
  RatMat c = mat_zero(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline RatVec mat_apply(const RatMat& a, const RatVec& x) {
  RatVec y(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Row-echelon elimination in place; returns the rank. Extra right-hand
/// columns (beyond `lead_cols`) ride along untouched by pivot selection.
inline std::size_t gauss_eliminate(RatMat& m, std::size_t lead_cols) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < lead_cols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    const Rational inv = Rational(1) / m[rank][col];
    for (auto& v : m[rank]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= factor * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t mat_rank(RatMat m) {
  if (m.empty()) return 0;
  return gauss_eliminate(m, m[0].size());
}

inline Rational mat_det(RatMat m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const Rational inv = Rational(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational factor = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

/// Solves A x = b for square nonsingular A; empty result when singular.
inline std::optional<RatVec> mat_solve(RatMat a, RatVec b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  if (gauss_eliminate(a, n) < n) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) {
    // after full elimination rows are unit rows in some column order
    std::size_t lead = 0;
    while (lead < n && a[i][lead] == 0) ++lead;
    if (lead == n) return std::nullopt;
    x[lead] = a[i][n];
  }
  return x;
}

inline std::optional<RatMat> mat_inverse(const RatMat& a) {
  const std::size_t n = a.size();
  RatMat work = a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) work[i].push_back(i == j ? Rational(1) : Rational(0));
  }
  if (gauss_eliminate(work, n) < n) return std::nullopt;
  // rows may be permuted: row with leading 1 in column l is row l of the
  // reduced identity, so read the inverse off by leading column
  RatMat inv = mat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lead = 0;
    while (lead < n && work[i][lead] == 0) ++lead;
    for (std::size_t j = 0; j < n; ++j) inv[lead][j] = work[i][n + j];
  }
  return inv;
}

/// A basis of the null space of A (columns as vectors in R^cols).
inline std::vector<RatVec> mat_kernel(RatMat a, std::size_t cols) {
  if (a.empty()) {
    std::vector<RatVec> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      RatVec e(cols, Rational(0));
      e[j] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  gauss_eliminate(a, cols);
  std::vector<long> lead_of_col(cols, -1);
  for (std::size_t r = 0; r < a.size(); ++r) {
    std::size_t lead = 0;
    while (lead < cols && a[r][lead] == 0) ++lead;
    if (lead < cols) lead_of_col[lead] = static_cast<long>(r);
  }
  std::vector<RatVec> basis;
  for (std::size_t j = 0; j < cols; ++j) {
    if (lead_of_col[j] >= 0) continue;
    RatVec v(cols, Rational(0));
    v[j] = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      if (lead_of_col[c] >= 0) v[c] = -a[static_cast<std::size_t>(lead_of_col[c])][j];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace ssindex
