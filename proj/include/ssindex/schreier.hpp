#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssindex/finite_set.hpp"
#include "ssindex/ordinal.hpp"

namespace ssindex {

// Schreier families S_xi, built by transfinite recursion:
//   S_0     = singletons and the empty set;
//   S_(z+1) = unions of at most (min F) consecutive nonempty S_z blocks;
//   S_xi    = union over n of S_(xi[n]) restricted to sets with min >= n,
//             along the canonical fundamental sequence, for limit xi.
// The empty set belongs to every S_xi. All families here are hereditary
// (closed under subsets) and spreading (closed under order-preserving
// right shifts); tests rely on both.

// Lock-protected memo for membership results, keyed by (xi, F).
class SchreierCache {
 public:
  std::optional<bool> lookup(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& key, bool value) {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, value);
  }
  std::size_t size() {
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, bool> memo_;
};

inline SchreierCache& global_schreier_cache() {
  static SchreierCache cache;
  return cache;
}

namespace detail {
inline std::string member_key(const std::string& xi_str, const FiniteSet& f) {
  std::string key = xi_str;
  key += '|';
  for (int v : f.elements()) {
    key += std::to_string(v);
    key += ',';
  }
  return key;
}
}  // namespace detail

bool schreier_member(const Ordinal& xi, const FiniteSet& f,
                     SchreierCache& cache = global_schreier_cache());

/// Least number of consecutive nonempty S_zeta blocks covering F, computed
/// greedily (longest admissible prefix first); nullopt marks "no cover",
/// which cannot occur since singletons lie in every family. F must be
/// nonempty. Hereditarity makes the greedy choice optimal; tests cross-check
/// against an exhaustive split search.
inline std::optional<int> schreier_min_blocks(const Ordinal& zeta, const FiniteSet& f,
                                              SchreierCache& cache = global_schreier_cache()) {
  if (f.empty()) throw std::invalid_argument("min_blocks requires a nonempty set");
  std::size_t pos = 0;
  int blocks = 0;
  while (pos < f.size()) {
    // longest prefix of the remainder still in S_zeta; membership is
    // monotone under shrinking, so scan upward until it fails
    std::size_t len = 0;
    while (pos + len < f.size() && schreier_member(zeta, f.slice(pos, pos + len + 1), cache)) ++len;
    if (len == 0) return std::nullopt;
    pos += len;
    ++blocks;
  }
  return blocks;
}

inline bool schreier_member(const Ordinal& xi, const FiniteSet& f, SchreierCache& cache) {
  if (f.empty()) return true;
  if (xi.is_zero()) return f.size() <= 1;
  const std::string key = detail::member_key(xi.str(), f);
  if (auto hit = cache.lookup(key)) return *hit;

  bool result = false;
  if (xi.classify() == Ordinal::Kind::Successor) {
    const auto blocks = schreier_min_blocks(xi.predecessor(), f, cache);
    result = blocks.has_value() && *blocks <= f.min();
  } else {
    for (int n = 1; n <= f.min(); ++n) {
      if (schreier_member(xi.fundamental(static_cast<std::uint64_t>(n)), f, cache)) {
        result = true;
        break;
      }
    }
  }
  cache.store(key, result);
  return result;
}

/// Maximality of F in S_xi: probes F + {max F + 1}; by the spreading
/// property a single probe decides, but a guard scan over the next
/// `guard` candidates is kept as a cross-check.
inline bool schreier_is_maximal(const Ordinal& xi, const FiniteSet& f,
                                SchreierCache& cache = global_schreier_cache(), int guard = 64) {
  if (!schreier_member(xi, f, cache))
    throw std::invalid_argument("is_maximal requires a member of S_xi");
  const int start = f.empty() ? 1 : f.max() + 1;
  for (int m = start; m < start + std::max(1, guard); ++m) {
    if (schreier_member(xi, f.with(m), cache)) return false;
  }
  return true;
}

/// All members of S_xi contained in {1..max_element}, in length-lex order.
inline std::vector<FiniteSet> schreier_enumerate(const Ordinal& xi, int max_element,
                                                 SchreierCache& cache = global_schreier_cache()) {
  if (max_element < 1) throw std::invalid_argument("enumerate requires max_element >= 1");
  std::vector<FiniteSet> out;
  // DFS over increasing extensions; supersets of non-members stay outside,
  // so pruning at the first failure is sound.
  std::vector<int> current;
  auto dfs = [&](auto&& self, int next_min) -> void {
    out.push_back(FiniteSet(current));
    for (int k = next_min; k <= max_element; ++k) {
      current.push_back(k);
      if (schreier_member(xi, FiniteSet(current), cache))
        self(self, k + 1);
      current.pop_back();
    }
  };
  dfs(dfs, 1);
  std::sort(out.begin(), out.end(), FiniteSet::length_lex_less);
  return out;
}

/// Members of S_xi within {1..max_element} that admit no extension by a
/// larger element of the range; every member is contained in one of these.
inline std::vector<FiniteSet> schreier_enumerate_range_maximal(
    const Ordinal& xi, int max_element, SchreierCache& cache = global_schreier_cache()) {
  std::vector<FiniteSet> out;
  std::vector<int> current;
  auto dfs = [&](auto&& self, int next_min) -> void {
    bool extended = false;
    for (int k = next_min; k <= max_element; ++k) {
      current.push_back(k);
      if (schreier_member(xi, FiniteSet(current), cache)) {
        extended = true;
        self(self, k + 1);
      }
      current.pop_back();
    }
    if (!extended && !current.empty()) out.push_back(FiniteSet(current));
  };
  dfs(dfs, 1);
  return out;  // DFS (lexicographic) order
}

}  // namespace ssindex
