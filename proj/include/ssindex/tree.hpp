#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssindex/schreier.hpp"

namespace ssindex {

// A finite tree on N: a prefix-closed set of finite sequences of positive
// integers. The derivative keeps exactly the nodes with a proper
// end-extension; the rank is the number of derivatives needed to empty the
// tree (equivalently the longest root-to-leaf chain, counting nodes).
class FiniteTree {
 public:
  using Node = std::vector<int>;

  FiniteTree() = default;

  explicit FiniteTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    validate();
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }

  bool contains(const Node& n) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), n);
  }

  FiniteTree derivative() const {
    std::vector<Node> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      // in lexicographic order the immediate successor of a node with a
      // proper end-extension is one of its children
      if (i + 1 < nodes_.size() && is_proper_prefix(nodes_[i], nodes_[i + 1]))
        out.push_back(nodes_[i]);
    }
    FiniteTree t;
    t.nodes_ = std::move(out);  // derivative preserves order and closure
    return t;
  }

  /// Rank via node heights: height(leaf) = 1, height(s) = 1 + max over
  /// children; the rank is the root height (0 for the empty tree).
  int rank() const {
    if (nodes_.empty()) return 0;
    std::map<Node, int> height;
    // descending length so every child is processed before its parent
    std::vector<const Node*> order;
    order.reserve(nodes_.size());
    for (const auto& n : nodes_) order.push_back(&n);
    std::stable_sort(order.begin(), order.end(),
                     [](const Node* a, const Node* b) { return a->size() > b->size(); });
    int best = 0;
    for (const Node* n : order) {
      int h = 1;
      auto it = height.find(*n);
      if (it != height.end()) h = it->second;
      best = std::max(best, h);
      if (!n->empty()) {
        Node parent(n->begin(), n->end() - 1);
        auto [pit, inserted] = height.emplace(std::move(parent), h + 1);
        if (!inserted) pit->second = std::max(pit->second, h + 1);
      }
    }
    return best;
  }

  /// Rank by folding the derivative until empty; agrees with rank().
  int rank_by_iteration() const {
    int k = 0;
    FiniteTree t = *this;
    while (!t.empty()) {
      t = t.derivative();
      ++k;
    }
    return k;
  }

  /// One node per line, entries space-separated; the root prints as "-".
  std::string serialize() const {
    std::string out;
    for (const auto& n : nodes_) {
      if (n.empty()) {
        out += "-";
      } else {
        for (std::size_t i = 0; i < n.size(); ++i) {
          if (i) out += ' ';
          out += std::to_string(n[i]);
        }
      }
      out += '\n';
    }
    return out;
  }

  static FiniteTree deserialize(std::string_view text) {
    std::vector<Node> nodes;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      if (line.empty()) continue;
      if (line == "-") {
        nodes.push_back({});
        continue;
      }
      Node n;
      std::size_t i = 0;
      while (i < line.size()) {
        if (line[i] < '0' || line[i] > '9')
          throw std::invalid_argument("tree parse error: bad entry in line '" + std::string(line) + "'");
        int v = 0;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9') v = v * 10 + (line[i++] - '0');
        n.push_back(v);
        while (i < line.size() && line[i] == ' ') ++i;
      }
      nodes.push_back(std::move(n));
    }
    return FiniteTree(std::move(nodes));
  }

  friend bool operator==(const FiniteTree&, const FiniteTree&) = default;

 private:
  std::vector<Node> nodes_;  // sorted lexicographically (prefixes first)

  static bool is_proper_prefix(const Node& a, const Node& b) {
    return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
  }

  void validate() const {
    for (const auto& n : nodes_) {
      for (int v : n)
        if (v < 1) throw std::invalid_argument("tree entries must be >= 1");
      if (!n.empty()) {
        Node parent(n.begin(), n.end() - 1);
        if (!contains(parent)) throw std::invalid_argument("tree is not prefix-closed");
      }
    }
  }
};

/// S_xi realized as the tree of increasing sequences whose underlying set is
/// a member, truncated to entries <= max_element. Prefix-closed because the
/// family is hereditary.
inline FiniteTree restricted_schreier_tree(const Ordinal& xi, int max_element,
                                           SchreierCache& cache = global_schreier_cache()) {
  std::vector<FiniteTree::Node> nodes;
  for (const FiniteSet& f : schreier_enumerate(xi, max_element, cache))
    nodes.push_back(f.elements());
  return FiniteTree(std::move(nodes));
}

enum class ExplorationVerdict { Finite, HitBound };

inline std::string verdict_str(ExplorationVerdict v) {
  return v == ExplorationVerdict::Finite ? "finite" : "hit-bound";
}

struct ExplorationResult {
  FiniteTree truncation;
  ExplorationVerdict verdict = ExplorationVerdict::Finite;
  int rank = 0;
};

/// Bounded exploration of a lazily defined tree: expands every admitted node
/// with entries <= width_bound up to length depth_bound. "finite" means no
/// admitted node reached the depth bound; "hit-bound" makes no claim of
/// ill-foundedness, it only reports that the truncation touched the bound.
template <typename Pred>
ExplorationResult explore_bounded(Pred&& admits, int depth_bound, int width_bound) {
  if (depth_bound < 1 || width_bound < 1)
    throw std::invalid_argument("exploration bounds must be >= 1");
  std::vector<FiniteTree::Node> nodes;
  bool touched_bound = false;
  FiniteTree::Node current;
  if (admits(static_cast<const FiniteTree::Node&>(current))) {
    auto dfs = [&](auto&& self) -> void {
      nodes.push_back(current);
      if (static_cast<int>(current.size()) == depth_bound) {
        touched_bound = true;
        return;
      }
      for (int k = 1; k <= width_bound; ++k) {
        current.push_back(k);
        if (admits(static_cast<const FiniteTree::Node&>(current))) self(self);
        current.pop_back();
      }
    };
    dfs(dfs);
  }
  ExplorationResult r;
  r.truncation = FiniteTree(std::move(nodes));
  r.verdict = touched_bound ? ExplorationVerdict::HitBound : ExplorationVerdict::Finite;
  r.rank = r.truncation.rank();
  return r;
}

}  // namespace ssindex
