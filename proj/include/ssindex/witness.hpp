#pragma once

#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssindex/operator.hpp"
#include "ssindex/parallel.hpp"
#include "ssindex/polyhedral.hpp"
#include "ssindex/polynomial.hpp"
#include "ssindex/tree.hpp"

namespace ssindex {

/// A node decision could not be certified within the configured budgets.
/// Surfaced instead of guessing; carries the node it happened at.
class undecided_error : public std::runtime_error {
 public:
  undecided_error(std::string reason, std::vector<int> node)
      : std::runtime_error("undecided: " + reason + " (node " + node_str(node) + ")"),
        node_(std::move(node)),
        reason_(std::move(reason)) {}

  const std::vector<int>& node() const { return node_; }
  const std::string& reason() const { return reason_; }

  static std::string node_str(const std::vector<int>& node) {
    std::string s = "(";
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(node[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> node_;
  std::string reason_;
};

struct SearchConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t max_candidate_sets = 512;  // cap on enumerated sets per search
  std::size_t max_span = 12;             // skip candidate sets larger than this
  std::size_t max_functionals = 4096;    // norming-set generation cap per side
  std::size_t max_lp_rows = 512;         // codomain rows admitted into the LP route
  std::size_t vertex_combo_budget = 200000;
  int random_tries = 10000;              // randomized directions on non-polyhedral pairs
  int refine_rounds = 2;
  int eigen_refine_steps = 64;           // pencil bisection budget
};

// ---------------------------------------------------------------------------
// Span contexts: the operator restricted to the span of chosen sequence
// vectors, in exact matrix form.
// ---------------------------------------------------------------------------

namespace detail {

struct SpanContext {
  std::vector<int> positions;   // 1-based indices into the sequence
  std::vector<int> ambient_in;  // union of supports of the chosen vectors
  std::vector<int> ambient_out; // union of supports of their images
  RatMat b;                     // |ambient_in| x k, columns = vectors
  RatMat tb;                    // |ambient_out| x k, columns = images
};

inline SpanContext make_span_context(const Operator& op, const BasicSequence& seq,
                                     const std::vector<int>& positions) {
  SpanContext ctx;
  ctx.positions = positions;
  std::vector<RationalVector> vecs, images;
  for (int p : positions) {
    vecs.push_back(seq.at(p));
    images.push_back(op.apply(vecs.back()));
  }
  auto collect = [](const std::vector<RationalVector>& vs) {
    std::vector<int> idx;
    for (const auto& v : vs)
      for (const auto& [i, val] : v.entries()) idx.push_back(i);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
  };
  ctx.ambient_in = collect(vecs);
  ctx.ambient_out = collect(images);
  auto fill = [](const std::vector<int>& ambient, const std::vector<RationalVector>& vs) {
    RatMat m = mat_zero(ambient.size(), vs.size());
    for (std::size_t t = 0; t < vs.size(); ++t)
      for (const auto& [i, val] : vs[t].entries()) {
        const auto r = std::lower_bound(ambient.begin(), ambient.end(), i) - ambient.begin();
        m[static_cast<std::size_t>(r)][t] = val;
      }
    return m;
  };
  ctx.b = fill(ctx.ambient_in, vecs);
  ctx.tb = fill(ctx.ambient_out, images);
  return ctx;
}

inline RationalVector span_point(const SpanContext& ctx, const BasicSequence& seq,
                                 const RatVec& a) {
  RationalVector x;
  for (std::size_t t = 0; t < ctx.positions.size(); ++t)
    if (a[t] != 0) x = x + a[t] * seq.at(ctx.positions[t]);
  return x;
}

/// Functional rows of a polyhedral norm composed with a span matrix:
/// row_t = f^T M for each representative f on the ambient index set.
inline std::optional<RatMat> functional_rows(const NormDescriptor& d,
                                             const std::vector<int>& ambient, const RatMat& m,
                                             std::size_t max_functionals, SchreierCache& cache) {
  auto reps = norming_functionals(d, FiniteSet(ambient), max_functionals, cache);
  if (!reps) return std::nullopt;
  RatMat rows;
  rows.reserve(reps->size());
  const std::size_t k = m.empty() ? 0 : m[0].size();
  for (const auto& f : *reps) {
    RatVec row(k, Rational(0));
    for (const auto& [i, val] : f.entries()) {
      const auto r = std::lower_bound(ambient.begin(), ambient.end(), i) - ambient.begin();
      for (std::size_t j = 0; j < k; ++j) row[j] += val * m[static_cast<std::size_t>(r)][j];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RatMat expand_signs(const RatMat& rows) {
  RatMat out;
  out.reserve(rows.size() * 2);
  for (const auto& r : rows) {
    out.push_back(r);
    RatVec neg = r;
    for (auto& v : neg) v = -v;
    out.push_back(std::move(neg));
  }
  return out;
}

struct MinRatioOutcome {
  NormValue value;  // minimum of ||Tx||/||x|| over the span (or an upper bound, see exact)
  RatVec argmin;    // span coefficients attaining value
  bool exact = true;
};

/// Exact minimum of the operator ratio over the span for the routes that
/// admit one within budget:
///   poly/poly  : per-functional LP over {||TBa||_cod <= 1}
///   poly -> l2 : ellipsoid support function f M^-1 f^T
///   l2 -> poly : vertex enumeration of {||TBa||_cod <= 1}, max a^T G a
/// Returns nullopt when budgets rule the route out; l2 -> l2 is handled by
/// the separate pencil routines below.
inline std::optional<MinRatioOutcome> exact_min_ratio(const SpanContext& ctx,
                                                      const NormDescriptor& dom,
                                                      const NormDescriptor& cod,
                                                      const SearchConfig& cfg,
                                                      SchreierCache& cache) {
  const std::size_t k = ctx.positions.size();
  // operator kernel on the span -> the ratio minimum is exactly zero
  {
    RatMat rows = ctx.tb;
    if (mat_rank(rows) < k) {
      auto basis = mat_kernel(ctx.tb, k);
      MinRatioOutcome out;
      out.value = NormValue::from_exact(Rational(0));
      out.argmin = basis.front();
      return out;
    }
  }

  if (dom.is_l2() && cod.is_l2()) return std::nullopt;

  if (!cod.is_l2()) {
    auto cod_rows = functional_rows(cod, ctx.ambient_out, ctx.tb, cfg.max_functionals, cache);
    if (!cod_rows) return std::nullopt;
    if (cod_rows->size() * 2 > cfg.max_lp_rows) return std::nullopt;
    const RatMat constraints = expand_signs(*cod_rows);

    if (!dom.is_l2()) {
      auto dom_rows = functional_rows(dom, ctx.ambient_in, ctx.b, cfg.max_functionals, cache);
      if (!dom_rows) return std::nullopt;
      // max over f of max { f.a : ||TBa||_cod <= 1 } = 1 / min-ratio
      std::optional<SimplexResult> best;
      for (const auto& f : *dom_rows) {
        auto r = simplex_maximize(constraints, f);
        if (!r) throw std::logic_error("span LP unbounded despite injective restriction");
        if (!best || r->value > best->value) best = r;
      }
      if (!best || best->value <= 0)
        throw std::logic_error("polyhedral norm vanished on a nonzero span");
      MinRatioOutcome out;
      out.value = NormValue::from_exact(Rational(1) / best->value);
      out.argmin = best->point;
      return out;
    }

    // l2 domain: maximize a^T G a over the codomain polytope
    RatMat gram = mat_mul(mat_transpose(ctx.b), ctx.b);
    auto q = max_quadratic_over_polytope(constraints, gram, cfg.vertex_combo_budget);
    if (!q) return std::nullopt;
    if (q->value <= 0) throw std::logic_error("gram form vanished on a nonzero span");
    MinRatioOutcome out;
    out.value = NormValue::from_square(Rational(1) / q->value);
    out.argmin = q->argmax;
    return out;
  }

  // l2 codomain, polyhedral domain: support function of the image ellipsoid
  RatMat m = mat_mul(mat_transpose(ctx.tb), ctx.tb);
  auto minv = mat_inverse(m);
  if (!minv) throw std::logic_error("singular image form after kernel check");
  auto dom_rows = functional_rows(dom, ctx.ambient_in, ctx.b, cfg.max_functionals, cache);
  if (!dom_rows) return std::nullopt;
  std::optional<Rational> best;
  RatVec best_arg;
  for (const auto& f : *dom_rows) {
    const RatVec z = mat_apply(*minv, f);
    const Rational v = dot(f, z);
    if (!best || v > *best) {
      best = v;
      best_arg = z;
    }
  }
  if (!best || *best <= 0) throw std::logic_error("polyhedral norm vanished on a nonzero span");
  MinRatioOutcome out;
  out.value = NormValue::from_square(Rational(1) / *best);
  out.argmin = best_arg;
  return out;
}

/// Exact decision "min ratio >= threshold" for the l2 -> l2 pair via Sturm
/// root counting on det(M - lambda G); never guesses.
inline bool pencil_min_ratio_at_least(const SpanContext& ctx, const Rational& threshold) {
  RatMat m = mat_mul(mat_transpose(ctx.tb), ctx.tb);
  RatMat g = mat_mul(mat_transpose(ctx.b), ctx.b);
  const Poly p = pencil_char_poly(m, g);
  const Rational t2 = threshold * threshold;
  const auto chain = sturm_chain(p);
  // eigenvalues < t^2 <=> roots in (-1, t^2] minus a root exactly at t^2
  int below = sturm_count_roots(chain, Rational(-1), t2);
  if (poly_eval(p, t2) == 0) --below;
  return below == 0;
}

/// Concrete near-minimizing vector for the l2 -> l2 pair: encloses the
/// smallest pencil eigenvalue, then runs exact shifted inverse iteration.
/// The returned ratio is attained by argmin (an upper bound on the true
/// minimum, converging with the refinement budget).
inline MinRatioOutcome pencil_best_effort_min(const SpanContext& ctx, const SearchConfig& cfg) {
  const std::size_t k = ctx.positions.size();
  RatMat m = mat_mul(mat_transpose(ctx.tb), ctx.tb);
  RatMat g = mat_mul(mat_transpose(ctx.b), ctx.b);
  const Poly p = pencil_char_poly(m, g);

  // Rayleigh quotient of e_1 bounds the smallest eigenvalue from above
  auto rayleigh = [&](const RatVec& a) {
    Rational num = 0, den = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        num += a[i] * m[i][j] * a[j];
        den += a[i] * g[i][j] * a[j];
      }
    return num / den;
  };
  RatVec a(k, Rational(0));
  a[0] = 1;
  Rational hi_seed = rayleigh(a);
  if (hi_seed == 0) return {NormValue::from_exact(Rational(0)), a, true};

  const auto root = smallest_nonnegative_root(p, hi_seed, cfg.eigen_refine_steps);
  if (root.found && root.enclosure.lo == root.enclosure.hi) {
    // rational eigenvalue: extract an exact eigenvector
    RatMat shifted = m;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) shifted[i][j] -= root.enclosure.lo * g[i][j];
    auto kernel = mat_kernel(shifted, k);
    if (!kernel.empty())
      return {NormValue::from_square(root.enclosure.lo), kernel.front(), true};
  }
  if (root.found) {
    // shifted inverse iteration from below the smallest eigenvalue
    const Rational shift = root.enclosure.lo;
    RatMat shifted = m;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) shifted[i][j] -= shift * g[i][j];
    for (std::size_t start = 0; start < k; ++start) {
      RatVec v(k, Rational(0));
      v[start] = 1;
      bool ok = true;
      for (int it = 0; it < 4 && ok; ++it) {
        auto next = mat_solve(shifted, mat_apply(g, v));
        if (!next) {
          ok = false;
          break;
        }
        // renormalize by the largest entry to keep numbers small
        Rational scale = 0;
        for (const auto& c : *next) scale = std::max(scale, rational_abs(c));
        if (scale == 0) {
          ok = false;
          break;
        }
        for (auto& c : *next) c /= scale;
        v = std::move(*next);
      }
      if (ok) {
        const Rational r = rayleigh(v);
        if (r <= rayleigh(a)) a = v;
      }
    }
  }
  return {NormValue::from_square(rayleigh(a)), a, false};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// node_admitted: the witness-tree admission rule. True iff the minimum of
// ||Tx|| / ||x|| over the span of the chosen sequence vectors is >= 1/m,
// decided exactly; budget exhaustion raises undecided_error.
// ---------------------------------------------------------------------------
inline bool node_admitted(const Operator& op, int m, const BasicSequence& seq,
                          const std::vector<int>& node, const SearchConfig& cfg = {},
                          SchreierCache& cache = global_schreier_cache()) {
  if (m < 1) throw std::invalid_argument("threshold parameter m must be >= 1");
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (node[i] < 1 || static_cast<std::size_t>(node[i]) > seq.size())
      throw std::invalid_argument("node index out of sequence range");
    if (i > 0 && node[i] <= node[i - 1])
      throw std::invalid_argument("node indices must be strictly increasing");
  }
  if (node.empty()) return true;  // empty span, vacuous

  const Rational threshold(1, m);
  const auto ctx = detail::make_span_context(op, seq, node);
  if (op.domain().is_l2() && op.codomain().is_l2()) {
    // kernel shortcut mirrors the polyhedral path
    RatMat rows = ctx.tb;
    if (mat_rank(rows) < node.size()) return false;
    return detail::pencil_min_ratio_at_least(ctx, threshold);
  }
  auto outcome = detail::exact_min_ratio(ctx, op.domain(), op.codomain(), cfg, cache);
  if (!outcome) throw undecided_error("functional budget exhausted on span", node);
  return outcome->value.compare(threshold) >= 0;
}

// ---------------------------------------------------------------------------
// Witness trees: bounded truncation of T(R, m, (x_n)).
// ---------------------------------------------------------------------------
struct WitnessTreeResult {
  FiniteTree truncation;
  ExplorationVerdict verdict = ExplorationVerdict::Finite;
  int rank = 0;
};

/// Explores all admitted index tuples with entries <= width_bound and length
/// <= depth_bound. By default nodes are strictly increasing tuples; the
/// arbitrary-tuple mode admits repeats and reorderings (their spans coincide
/// with the span of the distinct index set). Admission is antitone under
/// extension, so only children of admitted nodes are visited.
inline WitnessTreeResult build_witness_tree(const Operator& op, int m, const BasicSequence& seq,
                                            int depth_bound, int width_bound,
                                            bool increasing_only = true,
                                            const SearchConfig& cfg = {},
                                            SchreierCache& cache = global_schreier_cache()) {
  if (depth_bound < 1 || width_bound < 1)
    throw std::invalid_argument("witness tree bounds must be >= 1");
  const int width = std::min<int>(width_bound, static_cast<int>(seq.size()));

  std::map<std::vector<int>, bool> admitted_by_set;  // distinct sorted index set
  auto admitted = [&](const std::vector<int>& node) {
    std::vector<int> key = node;
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    auto it = admitted_by_set.find(key);
    if (it != admitted_by_set.end()) return it->second;
    const bool result = node_admitted(op, m, seq, key, cfg, cache);
    admitted_by_set.emplace(std::move(key), result);
    return result;
  };

  std::vector<FiniteTree::Node> nodes;
  bool touched_bound = false;
  FiniteTree::Node current;
  auto dfs = [&](auto&& self) -> void {
    nodes.push_back(current);
    if (static_cast<int>(current.size()) == depth_bound) {
      touched_bound = true;
      return;
    }
    const int from = increasing_only && !current.empty() ? current.back() + 1 : 1;
    for (int k = from; k <= width; ++k) {
      current.push_back(k);
      if (admitted(current)) self(self);
      current.pop_back();
    }
  };
  dfs(dfs);  // root is always admitted (empty span)

  WitnessTreeResult r;
  r.truncation = FiniteTree(std::move(nodes));
  r.verdict = touched_bound ? ExplorationVerdict::HitBound : ExplorationVerdict::Finite;
  r.rank = r.truncation.rank();
  return r;
}

// ---------------------------------------------------------------------------
// Certificates of S_xi-strict-singularity at a fixed scale.
// ---------------------------------------------------------------------------
struct Certificate {
  Ordinal xi;
  Rational epsilon;
  FiniteSet indices;                  // F: positions into the sequence, in S_xi
  std::vector<Rational> coefficients; // canonical integers, first one positive
  NormValue ratio;                    // ||Tx|| / ||x|| for x = sum a_i x_i
  std::uint64_t seed = 0;
};

struct WitnessSearchResult {
  std::optional<Certificate> certificate;
  NormValue best_ratio;        // best ratio seen over the whole search
  FiniteSet best_indices;      // where it happened (after support shrink)
  std::size_t sets_examined = 0;
  bool enumeration_truncated = false;  // candidate-set budget was hit
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, const std::vector<int>& positions) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (int p : positions) {
    h ^= static_cast<std::uint64_t>(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return h;
}

struct SpanSearchOutcome {
  NormValue ratio;
  RatVec coefficients;
  bool valid = false;
};

/// Ratio at concrete span coefficients; nullopt when a is 0.
inline std::optional<NormValue> ratio_at(const Operator& op, const BasicSequence& seq,
                                         const SpanContext& ctx, const RatVec& a,
                                         SchreierCache& cache) {
  const RationalVector x = span_point(ctx, seq, a);
  if (x.is_zero()) return std::nullopt;
  const NormValue nx = norm(op.domain(), x, cache);
  const NormValue ny = norm(op.codomain(), op.apply(x), cache);
  return ny.divided_by(nx);
}

/// Deterministic candidate + refinement minimizer; the fallback when no
/// exact route fits the budget. Sound (every value is attained) but with no
/// minimality claim.
inline SpanSearchOutcome candidate_search(const Operator& op, const BasicSequence& seq,
                                          const SpanContext& ctx, const SearchConfig& cfg,
                                          SchreierCache& cache) {
  const std::size_t k = ctx.positions.size();
  SpanSearchOutcome best;
  auto consider = [&](const RatVec& a) {
    auto r = ratio_at(op, seq, ctx, a, cache);
    if (!r) return;
    if (!best.valid || r->compare(best.ratio) < 0) {
      best.valid = true;
      best.ratio = *r;
      best.coefficients = a;
    }
  };

  for (std::size_t t = 0; t < k; ++t) {
    RatVec a(k, Rational(0));
    a[t] = 1;
    consider(a);
  }
  consider(RatVec(k, Rational(1)));
  if (k >= 2 && k <= 7) {
    for (std::size_t mask = 0; mask < (std::size_t(1) << (k - 1)); ++mask) {
      RatVec a(k, Rational(1));
      for (std::size_t t = 1; t < k; ++t)
        if ((mask >> (t - 1)) & 1) a[t] = -1;
      consider(a);
    }
  }

  const bool use_random = cfg.random_tries > 0 && (op.domain().is_l2() || op.codomain().is_l2());
  if (use_random) {
    std::mt19937_64 rng(mix_seed(cfg.seed, ctx.positions));
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 6);
    for (int t = 0; t < cfg.random_tries; ++t) {
      RatVec a(k);
      for (auto& c : a) c = Rational(num(rng), den(rng));
      consider(a);
    }
  }

  static const Rational grid[] = {Rational(0),     Rational(1, 4), Rational(1, 2),
                                  Rational(3, 4),  Rational(1),    Rational(3, 2),
                                  Rational(2),     Rational(-1, 2), Rational(-1)};
  for (int round = 0; round < cfg.refine_rounds && best.valid; ++round) {
    bool improved = false;
    for (std::size_t t = 0; t < k; ++t) {
      const RatVec base = best.coefficients;
      for (const Rational& g : grid) {
        RatVec a = base;
        a[t] = base[t] == 0 ? g : base[t] * g;
        auto r = ratio_at(op, seq, ctx, a, cache);
        if (r && r->compare(best.ratio) < 0) {
          best.ratio = *r;
          best.coefficients = a;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return best;
}

inline SpanSearchOutcome minimize_on_span(const Operator& op, const BasicSequence& seq,
                                          const std::vector<int>& positions,
                                          const SearchConfig& cfg, SchreierCache& cache) {
  const auto ctx = make_span_context(op, seq, positions);
  if (op.domain().is_l2() && op.codomain().is_l2()) {
    RatMat rows = ctx.tb;
    if (mat_rank(rows) < positions.size()) {
      auto kernel = mat_kernel(ctx.tb, positions.size());
      return {NormValue::from_exact(Rational(0)), kernel.front(), true};
    }
    auto r = pencil_best_effort_min(ctx, cfg);
    SpanSearchOutcome out{r.value, r.argmin, true};
    auto cand = candidate_search(op, seq, ctx, cfg, cache);
    if (cand.valid && cand.ratio.compare(out.ratio) < 0) return cand;
    return out;
  }
  if (auto exact = exact_min_ratio(ctx, op.domain(), op.codomain(), cfg, cache))
    return {exact->value, exact->argmin, true};
  return candidate_search(op, seq, ctx, cfg, cache);
}

struct CanonicalCoefficients {
  FiniteSet indices;
  std::vector<Rational> values;  // integers, gcd 1, first positive
};

inline CanonicalCoefficients canonicalize(const std::vector<int>& positions, const RatVec& a) {
  std::vector<int> idx;
  std::vector<Rational> vals;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t] != 0) {
      idx.push_back(positions[t]);
      vals.push_back(a[t]);
    }
  }
  Integer lcm_den = 1;
  for (const auto& v : vals)
    lcm_den = boost::multiprecision::lcm(lcm_den, rational_den(v));
  Integer gcd_num = 0;
  std::vector<Integer> ints;
  for (const auto& v : vals) {
    ints.push_back(rational_num(v) * (lcm_den / rational_den(v)));
    gcd_num = boost::multiprecision::gcd(gcd_num, ints.back());
  }
  if (gcd_num == 0) gcd_num = 1;
  const bool flip = !ints.empty() && ints.front() < 0;
  std::vector<Rational> out;
  for (auto& v : ints) out.push_back(Rational(flip ? -v : v) / Rational(gcd_num));
  return {FiniteSet(std::move(idx)), std::move(out)};
}

inline bool coefficients_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// witness_search: look for F in S_xi and coefficients with ||Tx|| < eps ||x||
// on x = sum_{i in F} a_i x_i. Enumerates range-maximal members of S_xi over
// the sequence indices (their spans dominate all members), minimizes the
// ratio on each span, and keeps the best outcome; ties break toward the
// lexicographically least support and then the least coefficient tuple.
// Failure reports the best ratio found; it is evidence only, never a proof
// of non-membership in SS_xi.
// ---------------------------------------------------------------------------
inline WitnessSearchResult witness_search(const Operator& op, const Ordinal& xi,
                                          const Rational& epsilon, const BasicSequence& seq,
                                          const SearchConfig& cfg = {},
                                          SchreierCache& cache = global_schreier_cache()) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");

  std::vector<FiniteSet> candidates;
  bool truncated = false;
  {
    const int n = static_cast<int>(seq.size());
    std::vector<int> current;
    auto dfs = [&](auto&& self, int next_min) -> void {
      if (candidates.size() >= cfg.max_candidate_sets) {
        truncated = true;
        return;
      }
      bool extended = false;
      for (int k = next_min; k <= n; ++k) {
        current.push_back(k);
        if (current.size() <= cfg.max_span && schreier_member(xi, FiniteSet(current), cache)) {
          extended = true;
          self(self, k + 1);
        } else if (current.size() > cfg.max_span) {
          truncated = true;
        }
        current.pop_back();
        if (candidates.size() >= cfg.max_candidate_sets) {
          truncated = true;
          return;
        }
      }
      if (!extended && !current.empty()) candidates.push_back(FiniteSet(current));
    };
    dfs(dfs, 1);
  }

  WitnessSearchResult result;
  result.sets_examined = candidates.size();
  result.enumeration_truncated = truncated;

  std::function<detail::SpanSearchOutcome(std::size_t)> task = [&](std::size_t i) {
    return detail::minimize_on_span(op, seq, candidates[i].elements(), cfg, cache);
  };
  const auto outcomes = parallel_map<detail::SpanSearchOutcome>(candidates.size(), cfg.threads, task);

  std::optional<std::size_t> best;
  std::optional<detail::CanonicalCoefficients> best_canon;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].valid) continue;
    auto canon = detail::canonicalize(candidates[i].elements(), outcomes[i].coefficients);
    if (!best) {
      best = i;
      best_canon = std::move(canon);
      continue;
    }
    const auto cmp = outcomes[i].ratio.compare(outcomes[*best].ratio);
    if (cmp < 0 || (cmp == 0 && (canon.indices < best_canon->indices ||
                                 (canon.indices == best_canon->indices &&
                                  detail::coefficients_less(canon.values, best_canon->values))))) {
      best = i;
      best_canon = std::move(canon);
    }
  }

  if (!best) {
    result.best_ratio = NormValue::from_exact(Rational(0));
    return result;  // empty sequence range: nothing searched
  }
  result.best_ratio = outcomes[*best].ratio;
  result.best_indices = best_canon->indices;
  if (result.best_ratio.compare(epsilon) < 0) {
    Certificate cert;
    cert.xi = xi;
    cert.epsilon = epsilon;
    cert.indices = best_canon->indices;
    cert.coefficients = best_canon->values;
    cert.ratio = result.best_ratio;
    cert.seed = cfg.seed;
    result.certificate = std::move(cert);
  }
  return result;
}

/// Re-evaluates a certificate from scratch through the norm module;
/// returns true iff the ratio matches exactly, beats epsilon, and the
/// support set is a member of S_xi.
inline bool verify_certificate(const Operator& op, const Certificate& cert,
                               const BasicSequence& seq,
                               SchreierCache& cache = global_schreier_cache()) {
  if (!schreier_member(cert.xi, cert.indices, cache)) return false;
  RationalVector x;
  const auto& idx = cert.indices.elements();
  if (idx.size() != cert.coefficients.size()) return false;
  for (std::size_t t = 0; t < idx.size(); ++t) x = x + cert.coefficients[t] * seq.at(idx[t]);
  if (x.is_zero()) return false;
  const NormValue nx = norm(op.domain(), x, cache);
  const NormValue ny = norm(op.codomain(), op.apply(x), cache);
  const NormValue ratio = ny.divided_by(nx);
  return ratio.compare(cert.ratio) == 0 && ratio.compare(cert.epsilon) < 0;
}

// ---------------------------------------------------------------------------
// index_estimate: the finite-scale shadow of inf { xi : T in SS_xi }.
// ---------------------------------------------------------------------------
struct IndexCell {
  Ordinal xi;
  Rational epsilon;
  WitnessSearchResult outcome;
};

struct IndexReport {
  std::vector<IndexCell> cells;
  std::optional<Ordinal> bracket;  // least grid xi succeeding at every epsilon
};

inline IndexReport index_estimate(const Operator& op, const std::vector<Ordinal>& xi_grid,
                                  const std::vector<Rational>& eps_grid, const BasicSequence& seq,
                                  const SearchConfig& cfg = {},
                                  SchreierCache& cache = global_schreier_cache()) {
  if (xi_grid.empty() || eps_grid.empty())
    throw std::invalid_argument("index_estimate requires nonempty grids");
  for (std::size_t i = 1; i < xi_grid.size(); ++i)
    if (!(xi_grid[i - 1] < xi_grid[i]))
      throw std::invalid_argument("xi grid must be strictly ascending");

  IndexReport report;
  for (const auto& xi : xi_grid) {
    bool all = true;
    for (const auto& eps : eps_grid) {
      IndexCell cell{xi, eps, witness_search(op, xi, eps, seq, cfg, cache)};
      all = all && cell.outcome.certificate.has_value();
      report.cells.push_back(std::move(cell));
    }
    if (all && !report.bracket) report.bracket = xi;
  }
  return report;
}

}  // namespace ssindex
