#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ssindex/linalg.hpp"
#include "ssindex/rational.hpp"

namespace ssindex {

// Exact optimization over small polytopes {a : rows[i] . a <= 1}. The
// origin is always feasible, so the simplex below runs in a single phase.

struct SimplexResult {
  Rational value;
  RatVec point;
};

/// Maximizes c.a subject to rows[i].a <= 1 over free variables a.
/// Returns nullopt when the problem is unbounded. Exact rational tableau
/// simplex with Bland's rule (terminates, no cycling).
inline std::optional<SimplexResult> simplex_maximize(const RatMat& rows, const RatVec& c) {
  const std::size_t m = rows.size();
  const std::size_t k = c.size();
  const std::size_t n = 2 * k + m;  // a = u - v plus slack per row

  // tableau: m rows of n+1 (last = rhs), plus cost row of reduced costs
  RatMat t = mat_zero(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      t[i][j] = rows[i][j];
      t[i][k + j] = -rows[i][j];
    }
    t[i][2 * k + i] = 1;
    t[i][n] = 1;
  }
  RatVec cost(n + 1, Rational(0));
  for (std::size_t j = 0; j < k; ++j) {
    cost[j] = c[j];
    cost[k + j] = -c[j];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = 2 * k + i;

  while (true) {
    // Bland: smallest index with positive reduced cost enters
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (cost[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == n) break;

    std::size_t leave = m;
    Rational best_ratio = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational ratio = t[i][n] / t[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) return std::nullopt;  // unbounded

    // pivot on (leave, enter)
    const Rational inv = Rational(1) / t[leave][enter];
    for (auto& v : t[leave]) v *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j <= n; ++j) t[i][j] -= f * t[leave][j];
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t j = 0; j <= n; ++j) cost[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  SimplexResult r;
  r.value = -cost[n];  // cost row accumulated -(objective)
  r.point.assign(k, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < k)
      r.point[basis[i]] += t[i][n];
    else if (basis[i] < 2 * k)
      r.point[basis[i] - k] -= t[i][n];
  }
  return r;
}

struct QuadMaxResult {
  Rational value;
  RatVec argmax;
};

/// Maximizes the convex form a^T Q a over the polytope {rows.a <= 1} by
/// exact vertex enumeration (the maximum of a convex function over a
/// polytope sits at a vertex). Returns nullopt when the combination count
/// exceeds `combo_budget` or the polytope is unbounded/degenerate in a way
/// that leaves no vertices.
inline std::optional<QuadMaxResult> max_quadratic_over_polytope(const RatMat& rows,
                                                                const RatMat& q,
                                                                std::size_t combo_budget) {
  const std::size_t m = rows.size();
  const std::size_t k = q.size();
  if (m < k) return std::nullopt;

  // number of k-subsets of rows, capped
  {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) {
      combos = combos * (m - i) / (i + 1);
      if (combos > combo_budget) return std::nullopt;
    }
  }

  std::optional<QuadMaxResult> best;
  std::vector<std::size_t> pick(k);
  auto consider = [&](const RatVec& a) {
    for (const auto& row : rows)
      if (dot(row, a) > 1) return;  // infeasible
    Rational v = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) v += a[i] * q[i][j] * a[j];
    if (!best || v > best->value) best = QuadMaxResult{v, a};
  };
  auto rec = [&](auto&& self, std::size_t next, std::size_t depth) -> void {
    if (depth == k) {
      RatMat sys(k, RatVec(k));
      RatVec rhs(k, Rational(1));
      for (std::size_t i = 0; i < k; ++i) sys[i] = rows[pick[i]];
      if (auto a = mat_solve(std::move(sys), std::move(rhs))) consider(*a);
      return;
    }
    for (std::size_t i = next; i + (k - depth) <= m; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;  // nullopt when no basic solution was feasible
}

}  // namespace ssindex
