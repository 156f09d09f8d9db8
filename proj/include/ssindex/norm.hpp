#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssindex/rational.hpp"
#include "ssindex/schreier.hpp"
#include "ssindex/vector.hpp"

namespace ssindex {

// Norm descriptors for the supported sequence spaces. Text forms:
//   l1 | l2 | linf | schreier(<ord>) | tsirelson(<ord>,<rational>)
struct NormDescriptor {
  enum class Kind { L1, L2, LInf, Schreier, Tsirelson };

  Kind kind = Kind::L1;
  Ordinal xi;       // schreier / tsirelson
  Rational theta;   // tsirelson, strictly between 0 and 1

  static NormDescriptor l1() { return {Kind::L1, {}, {}}; }
  static NormDescriptor l2() { return {Kind::L2, {}, {}}; }
  static NormDescriptor linf() { return {Kind::LInf, {}, {}}; }
  static NormDescriptor schreier(Ordinal xi) { return {Kind::Schreier, std::move(xi), {}}; }
  static NormDescriptor tsirelson(Ordinal xi, Rational theta) {
    if (!(theta > 0 && theta < 1))
      throw std::invalid_argument("tsirelson theta must lie strictly between 0 and 1");
    return {Kind::Tsirelson, std::move(xi), std::move(theta)};
  }

  bool is_l2() const { return kind == Kind::L2; }
  bool is_polyhedral() const { return kind != Kind::L2; }

  friend bool operator==(const NormDescriptor& a, const NormDescriptor& b) {
    return a.kind == b.kind && a.xi == b.xi && a.theta == b.theta;
  }

  std::string str() const {
    switch (kind) {
      case Kind::L1: return "l1";
      case Kind::L2: return "l2";
      case Kind::LInf: return "linf";
      case Kind::Schreier: return "schreier(" + xi.str() + ")";
      case Kind::Tsirelson: return "tsirelson(" + xi.str() + "," + rational_str(theta) + ")";
    }
    return {};
  }

  static NormDescriptor parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    std::string_view s = trim(text);
    if (s == "l1") return l1();
    if (s == "l2") return l2();
    if (s == "linf") return linf();
    auto parse_call = [&](std::string_view name) -> std::optional<std::string_view> {
      if (s.size() > name.size() + 2 && s.substr(0, name.size()) == name &&
          s[name.size()] == '(' && s.back() == ')')
        return s.substr(name.size() + 1, s.size() - name.size() - 2);
      return std::nullopt;
    };
    if (auto inner = parse_call("schreier")) return schreier(Ordinal::parse(*inner));
    if (auto inner = parse_call("tsirelson")) {
      const auto comma = inner->find(',');
      if (comma == std::string_view::npos)
        throw std::invalid_argument("tsirelson descriptor needs '<ord>,<rational>'");
      return tsirelson(Ordinal::parse(trim(inner->substr(0, comma))),
                       parse_rational(inner->substr(comma + 1)));
    }
    throw std::invalid_argument("unknown norm descriptor '" + std::string(s) +
                                "' (expected l1|l2|linf|schreier(..)|tsirelson(..))");
  }
};

// A nonnegative norm (or ratio) value: either an exact rational, or the
// square root of an exact rational square. Comparisons against rational
// thresholds and other values go through the squares, hence stay exact.
class NormValue {
 public:
  NormValue() : exact_(true), value_(0), square_(0) {}

  static NormValue from_exact(Rational v) {
    if (v < 0) throw std::invalid_argument("norm values are nonnegative");
    NormValue n;
    n.exact_ = true;
    n.square_ = v * v;
    n.value_ = std::move(v);
    return n;
  }

  static NormValue from_square(Rational sq) {
    if (sq < 0) throw std::invalid_argument("squared norm must be nonnegative");
    if (auto root = exact_sqrt(sq)) return from_exact(*root);
    NormValue n;
    n.exact_ = false;
    n.square_ = std::move(sq);
    return n;
  }

  bool is_exact() const { return exact_; }
  const Rational& value() const {
    if (!exact_) throw std::logic_error("norm value is not exactly rational; use square()");
    return value_;
  }
  const Rational& square() const { return square_; }
  bool is_zero() const { return square_ == 0; }

  Interval enclosure(int steps = 64) const {
    if (exact_) return {value_, value_};
    return sqrt_enclosure(square_, steps);
  }

  std::strong_ordering compare(const Rational& threshold) const {
    if (threshold < 0) return std::strong_ordering::greater;
    return rational_cmp(square_, Rational(threshold * threshold));
  }
  std::strong_ordering compare(const NormValue& other) const {
    return rational_cmp(square_, other.square_);
  }

  NormValue scaled_by(const Rational& c) const {
    if (c < 0) throw std::invalid_argument("scale must be nonnegative");
    if (exact_) return from_exact(value_ * c);
    return from_square(square_ * c * c);
  }

  /// value(this) / value(d); both nonnegative, divisor nonzero.
  NormValue divided_by(const NormValue& d) const {
    if (d.square_ == 0) throw std::invalid_argument("division by zero norm");
    if (exact_ && d.exact_) return from_exact(value_ / d.value_);
    return from_square(square_ / d.square_);
  }

  std::string str() const {
    if (exact_) return rational_str(value_);
    return "sqrt(" + rational_str(square_) + ")";
  }

 private:
  bool exact_;
  Rational value_;
  Rational square_;
};

// ---------------------------------------------------------------------------
// Tsirelson evaluation
// ---------------------------------------------------------------------------

// Certificate for a Tsirelson norm value: a leaf takes |x_coordinate|, an
// inner node takes theta times the sum of its parts, which live on
// successive blocks whose minima form an admissible set.
struct TsirelsonWitness {
  int coordinate = 0;                   // leaf payload (0 = zero vector)
  std::vector<TsirelsonWitness> parts;  // nonempty for inner nodes
  FiniteSet block;                      // support block this node covers

  bool is_leaf() const { return parts.empty(); }
};

inline Rational eval_tsirelson_witness(const TsirelsonWitness& w, const RationalVector& x,
                                       const Rational& theta) {
  if (w.is_leaf()) return w.coordinate == 0 ? Rational(0) : rational_abs(x.coeff(w.coordinate));
  Rational sum = 0;
  for (const auto& part : w.parts) sum += eval_tsirelson_witness(part, x, theta);
  return theta * sum;
}

namespace detail {

// Memoized least-fixed-point recursion for T[S_xi, theta] on a finite
// support. A run [i..j] of support positions is scored as the max of the
// sup-norm over the run and theta times the best split into d >= 2
// successive blocks whose minima form a set in S_xi. Each block extends
// maximally up to the next chosen minimum (the norm is monotone under
// support inclusion, so wider blocks never lose). Splits with d = 1 are
// dominated because theta < 1, which makes the recursion well-founded:
// every recursive call sees a strictly shorter run.
class TsirelsonEvaluator {
 public:
  struct Entry {
    Rational value;
    TsirelsonWitness witness;
  };

  TsirelsonEvaluator(const Ordinal& xi, const Rational& theta,
                     const RationalVector& x, SchreierCache& cache)
      : xi_(xi), theta_(theta), cache_(cache) {
    for (const auto& [idx, val] : x.entries()) {
      positions_.push_back(idx);
      values_.push_back(rational_abs(val));
    }
    memo_.assign(positions_.size() * positions_.size(), std::nullopt);
  }

  const Entry& run(std::size_t i, std::size_t j) {
    auto& slot = memo_[i * positions_.size() + j];
    if (slot) return *slot;

    Entry best;
    best.value = values_[i];
    best.witness.coordinate = positions_[i];
    for (std::size_t l = i + 1; l <= j; ++l) {
      if (values_[l] > best.value) {
        best.value = values_[l];
        best.witness.coordinate = positions_[l];
      }
    }
    best.witness.block = block(i, j);

    // choose min positions q_1 < ... < q_d in [i..j]; closed blocks are
    // [q_t, q_{t+1}-1], the final block is [q_d, j]
    std::vector<std::size_t> chosen;
    std::vector<int> chosen_values;
    auto rec = [&](auto&& self, std::size_t next, const Rational& closed_sum) -> void {
      for (std::size_t q = next; q <= j; ++q) {
        chosen_values.push_back(positions_[q]);
        if (schreier_member(xi_, FiniteSet(chosen_values), cache_)) {
          chosen.push_back(q);
          Rational new_closed = closed_sum;
          if (chosen.size() >= 2) new_closed += run(chosen[chosen.size() - 2], q - 1).value;
          if (chosen.size() >= 2) {
            const Rational candidate = theta_ * (new_closed + run(q, j).value);
            if (candidate > best.value) {
              best.value = candidate;
              TsirelsonWitness w;
              w.block = block(i, j);
              for (std::size_t t = 0; t < chosen.size(); ++t) {
                const std::size_t b = chosen[t];
                const std::size_t e = (t + 1 < chosen.size()) ? chosen[t + 1] - 1 : j;
                w.parts.push_back(run(b, e).witness);
              }
              best.witness = std::move(w);
            }
          }
          if (q < j) self(self, q + 1, new_closed);
          chosen.pop_back();
        }
        chosen_values.pop_back();
      }
    };
    rec(rec, i, Rational(0));

    slot = std::move(best);
    return *slot;
  }

  std::size_t count() const { return positions_.size(); }

 private:
  const Ordinal& xi_;
  const Rational& theta_;
  SchreierCache& cache_;
  std::vector<int> positions_;
  std::vector<Rational> values_;
  std::vector<std::optional<Entry>> memo_;

  FiniteSet block(std::size_t i, std::size_t j) const {
    return FiniteSet(std::vector<int>(positions_.begin() + i, positions_.begin() + j + 1));
  }
};

}  // namespace detail

struct TsirelsonResult {
  Rational value;
  TsirelsonWitness witness;
};

inline TsirelsonResult tsirelson_norm(const Ordinal& xi, const Rational& theta,
                                      const RationalVector& x,
                                      SchreierCache& cache = global_schreier_cache()) {
  if (x.is_zero()) return {Rational(0), TsirelsonWitness{}};
  detail::TsirelsonEvaluator eval(xi, theta, x, cache);
  auto entry = eval.run(0, eval.count() - 1);
  return {entry.value, entry.witness};
}

// ---------------------------------------------------------------------------
// Schreier norm
// ---------------------------------------------------------------------------

struct SchreierNormResult {
  Rational value;
  FiniteSet witness;  // first maximizer in length-lex enumeration order
};

inline SchreierNormResult schreier_norm(const Ordinal& xi, const RationalVector& x,
                                        SchreierCache& cache = global_schreier_cache()) {
  // sup over F in S_xi of sum_{i in F} |x_i|; only subsets of the support
  // matter (the family is hereditary)
  const auto& entries = x.entries();
  std::vector<FiniteSet> members;
  std::vector<int> current;
  auto dfs = [&](auto&& self, std::size_t next) -> void {
    members.push_back(FiniteSet(current));
    for (std::size_t t = next; t < entries.size(); ++t) {
      current.push_back(entries[t].first);
      if (schreier_member(xi, FiniteSet(current), cache)) self(self, t + 1);
      current.pop_back();
    }
  };
  dfs(dfs, 0);
  std::sort(members.begin(), members.end(), FiniteSet::length_lex_less);

  SchreierNormResult best{Rational(0), FiniteSet()};
  for (const auto& f : members) {
    Rational sum = 0;
    for (int i : f.elements()) sum += rational_abs(x.coeff(i));
    if (sum > best.value) {
      best.value = sum;
      best.witness = f;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Norm dispatch
// ---------------------------------------------------------------------------

inline NormValue norm(const NormDescriptor& d, const RationalVector& x,
                      SchreierCache& cache = global_schreier_cache()) {
  switch (d.kind) {
    case NormDescriptor::Kind::L1: {
      Rational s = 0;
      for (const auto& [i, v] : x.entries()) s += rational_abs(v);
      return NormValue::from_exact(s);
    }
    case NormDescriptor::Kind::LInf: {
      Rational m = 0;
      for (const auto& [i, v] : x.entries()) m = std::max(m, rational_abs(v));
      return NormValue::from_exact(m);
    }
    case NormDescriptor::Kind::L2: {
      Rational sq = 0;
      for (const auto& [i, v] : x.entries()) sq += v * v;
      return NormValue::from_square(sq);
    }
    case NormDescriptor::Kind::Schreier:
      return NormValue::from_exact(schreier_norm(d.xi, x, cache).value);
    case NormDescriptor::Kind::Tsirelson:
      return NormValue::from_exact(tsirelson_norm(d.xi, d.theta, x, cache).value);
  }
  throw std::logic_error("unreachable norm kind");
}

using NormWitness = std::variant<FiniteSet, TsirelsonWitness>;

/// Structured optimizer achieving the sup in a combinatorial norm.
/// Re-evaluating the witness reproduces norm(d, x) exactly.
inline NormWitness dual_witness(const NormDescriptor& d, const RationalVector& x,
                                SchreierCache& cache = global_schreier_cache()) {
  if (d.kind == NormDescriptor::Kind::Schreier) return schreier_norm(d.xi, x, cache).witness;
  if (d.kind == NormDescriptor::Kind::Tsirelson) return tsirelson_norm(d.xi, d.theta, x, cache).witness;
  throw std::invalid_argument("dual_witness is defined for schreier and tsirelson norms only");
}

// ---------------------------------------------------------------------------
// Norming functionals (polyhedral descriptions on a fixed support)
// ---------------------------------------------------------------------------

/// Functionals spanning the polyhedral norm on the given support:
/// norm(x) = max |f(x)| over the returned representatives (the full set is
/// closed under negation; one representative per +/- pair is returned).
/// Returns nullopt when the set would exceed max_size. L2 is rejected.
inline std::optional<std::vector<RationalVector>> norming_functionals(
    const NormDescriptor& d, const FiniteSet& support, std::size_t max_size,
    SchreierCache& cache = global_schreier_cache()) {
  const auto& idx = support.elements();
  std::vector<RationalVector> out;

  auto sign_patterns_over = [&](const std::vector<int>& subset) {
    // all sign choices with the first coordinate positive
    std::vector<RationalVector> fs;
    if (subset.empty()) return fs;
    const std::size_t n = subset.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << (n - 1)); ++mask) {
      std::vector<std::pair<int, Rational>> entries;
      entries.emplace_back(subset[0], Rational(1));
      for (std::size_t t = 1; t < n; ++t)
        entries.emplace_back(subset[t], (mask >> (t - 1)) & 1 ? Rational(-1) : Rational(1));
      fs.push_back(RationalVector(entries));
    }
    return fs;
  };

  switch (d.kind) {
    case NormDescriptor::Kind::L1: {
      if (idx.empty()) return out;
      if (idx.size() >= 8 * sizeof(std::size_t) - 2 ||
          (std::size_t(1) << (idx.size() - 1)) > max_size)
        return std::nullopt;
      return sign_patterns_over(idx);
    }
    case NormDescriptor::Kind::LInf: {
      for (int i : idx) out.push_back(RationalVector::basis(i));
      if (out.size() > max_size) return std::nullopt;
      return out;
    }
    case NormDescriptor::Kind::Schreier: {
      std::vector<int> current;
      bool overflow = false;
      auto dfs = [&](auto&& self, std::size_t next) -> void {
        if (overflow) return;
        if (!current.empty()) {
          if (current.size() >= 8 * sizeof(std::size_t) - 2) {
            overflow = true;
            return;
          }
          for (auto& f : sign_patterns_over(current)) {
            out.push_back(std::move(f));
            if (out.size() > max_size) {
              overflow = true;
              return;
            }
          }
        }
        for (std::size_t t = next; t < idx.size(); ++t) {
          current.push_back(idx[t]);
          if (schreier_member(d.xi, FiniteSet(current), cache)) self(self, t + 1);
          current.pop_back();
          if (overflow) return;
        }
      };
      dfs(dfs, 0);
      if (overflow) return std::nullopt;
      return out;
    }
    case NormDescriptor::Kind::Tsirelson: {
      // closure of the coordinate functionals under
      //   g = theta * (s_1 f_1 + ... + s_d f_d),  s_t in {+1,-1},  d >= 2,
      // where the f_t have successive supports with {min supp f_t} in S_xi.
      // Combinations with d = 1 are dominated and skipped.
      std::set<std::string> seen;
      std::vector<RationalVector> work;
      for (int i : idx) {
        work.push_back(RationalVector::basis(i));
        seen.insert(work.back().str());
      }
      bool overflow = false;
      std::size_t frontier_start = 0;
      while (frontier_start < work.size() && !overflow) {
        const std::size_t frontier_end = work.size();
        std::vector<RationalVector> added;
        // order candidate parts by support minimum for the successive scan
        std::vector<std::size_t> by_min(work.size());
        for (std::size_t t = 0; t < work.size(); ++t) by_min[t] = t;
        std::sort(by_min.begin(), by_min.end(), [&](std::size_t a, std::size_t b) {
          return work[a].support().min() < work[b].support().min();
        });

        RationalVector sum;
        std::vector<int> mins;
        bool uses_new = false;
        int part_count = 0;
        auto emit = [&]() {
          RationalVector f = d.theta * sum;
          if (!f.entries().empty() && f.entries().front().second < 0) f = Rational(-1) * f;
          if (seen.insert(f.str()).second) added.push_back(std::move(f));
          if (seen.size() > max_size) overflow = true;
        };
        auto dfs = [&](auto&& self, int min_support) -> void {
          if (overflow) return;
          if (part_count >= 2 && uses_new) emit();
          for (std::size_t r = 0; r < by_min.size() && !overflow; ++r) {
            const std::size_t t = by_min[r];
            const RationalVector& cand = work[t];
            const FiniteSet supp = cand.support();
            if (supp.min() < min_support) continue;
            mins.push_back(supp.min());
            if (schreier_member(d.xi, FiniteSet(mins), cache)) {
              const bool was_new = t >= frontier_start;
              const bool saved = uses_new;
              uses_new = uses_new || was_new;
              ++part_count;
              for (int sign : {1, -1}) {
                RationalVector signed_cand = Rational(sign) * cand;
                sum = sum + signed_cand;
                self(self, supp.max() + 1);
                sum = sum - signed_cand;
              }
              --part_count;
              uses_new = saved;
            }
            mins.pop_back();
          }
        };
        dfs(dfs, 0);
        if (overflow) return std::nullopt;
        frontier_start = frontier_end;
        for (auto& f : added) work.push_back(std::move(f));
      }
      if (overflow) return std::nullopt;
      return work;
    }
    case NormDescriptor::Kind::L2:
      throw std::invalid_argument("l2 has no finite norming functional set");
  }
  throw std::logic_error("unreachable norm kind");
}

}  // namespace ssindex
