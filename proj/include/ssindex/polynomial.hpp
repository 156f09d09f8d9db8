#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "ssindex/linalg.hpp"
#include "ssindex/rational.hpp"

namespace ssindex {

// Polynomials over the rationals, coefficients in ascending degree order
// with no trailing zeros. Used for exact eigenvalue localization of small
// symmetric pencils det(A - lambda G) via Sturm sequences.
using Poly = std::vector<Rational>;

inline Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline bool poly_is_zero(const Poly& p) { return p.empty(); }
inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Rational poly_eval(const Poly& p, const Rational& x) {
  Rational v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

inline Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<int>(i)));
  return poly_trim(std::move(d));
}

inline Poly poly_neg(Poly p) {
  for (auto& c : p) c = -c;
  return p;
}

/// Remainder of a / b (b nonzero).
inline Poly poly_rem(Poly a, const Poly& b) {
  if (poly_is_zero(b)) throw std::invalid_argument("polynomial division by zero");
  while (!poly_is_zero(a) && a.size() >= b.size()) {
    const Rational factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
    a = poly_trim(std::move(a));
  }
  return a;
}

/// Sturm chain: p, p', then negated remainders.
inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  Poly p0 = poly_trim(p);
  if (poly_is_zero(p0)) return chain;
  chain.push_back(p0);
  Poly p1 = poly_derivative(p0);
  while (!poly_is_zero(p1)) {
    chain.push_back(p1);
    Poly r = poly_neg(poly_rem(chain[chain.size() - 2], p1));
    p1 = std::move(r);
  }
  return chain;
}

inline int sturm_sign_changes(const std::vector<Poly>& chain, const Rational& x) {
  int changes = 0;
  int prev = 0;
  for (const auto& q : chain) {
    const Rational v = poly_eval(q, x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

/// Number of distinct real roots of p in the half-open interval (a, b].
inline int sturm_count_roots(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
  if (chain.empty()) return 0;
  return sturm_sign_changes(chain, a) - sturm_sign_changes(chain, b);
}

/// Characteristic polynomial det(A - lambda G) by exact interpolation at
/// lambda = 0..n (Lagrange over rational nodes).
inline Poly pencil_char_poly(const RatMat& a, const RatMat& g) {
  const std::size_t n = a.size();
  const std::size_t points = n + 1;
  std::vector<Rational> values(points);
  for (std::size_t t = 0; t < points; ++t) {
    RatMat m = a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= Rational(static_cast<int>(t)) * g[i][j];
    values[t] = mat_det(std::move(m));
  }
  // Lagrange basis accumulation
  Poly result;
  for (std::size_t t = 0; t < points; ++t) {
    Poly basis = {Rational(1)};
    Rational denom = 1;
    for (std::size_t s = 0; s < points; ++s) {
      if (s == t) continue;
      // multiply by (x - s)
      Poly next(basis.size() + 1, Rational(0));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        next[i + 1] += basis[i];
        next[i] -= basis[i] * Rational(static_cast<int>(s));
      }
      basis = std::move(next);
      denom *= Rational(static_cast<int>(t)) - Rational(static_cast<int>(s));
    }
    const Rational scale = values[t] / denom;
    if (result.size() < basis.size()) result.resize(basis.size(), Rational(0));
    for (std::size_t i = 0; i < basis.size(); ++i) result[i] += basis[i] * scale;
  }
  return poly_trim(std::move(result));
}

struct SmallestRootResult {
  Interval enclosure;   // brackets the smallest root in [0, inf)
  bool found = false;   // false when p has no root in [0, hi_seed]
};

/// Encloses the smallest nonnegative root of p. `hi_seed` must be a known
/// upper bound for that root when one exists. `steps` bisection rounds.
inline SmallestRootResult smallest_nonnegative_root(const Poly& p, const Rational& hi_seed,
                                                    int steps = 64) {
  SmallestRootResult out;
  const auto chain = sturm_chain(p);
  if (chain.empty()) return out;
  auto roots_leq = [&](const Rational& t) {
    return sturm_count_roots(chain, Rational(-1), t);  // roots in (-1, t]
  };
  if (poly_eval(p, Rational(0)) == 0) {
    out.enclosure = {Rational(0), Rational(0)};
    out.found = true;
    return out;
  }
  if (roots_leq(hi_seed) - roots_leq(Rational(0)) == 0) return out;
  Rational lo = 0, hi = hi_seed;
  for (int i = 0; i < steps; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (roots_leq(mid) - roots_leq(Rational(0)) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  out.enclosure = {lo, hi};
  out.found = true;
  return out;
}

}  // namespace ssindex
