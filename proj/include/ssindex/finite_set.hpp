#pragma once

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssindex {

// A strictly increasing finite sequence of integers >= 1. Text form: "{2,3,10}".
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::vector<int> elems) : elems_(std::move(elems)) {
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i] < 1) throw std::invalid_argument("set elements must be >= 1");
      if (i > 0 && elems_[i] <= elems_[i - 1])
        throw std::invalid_argument("set elements must be strictly increasing");
    }
  }

  static FiniteSet from_unordered(std::vector<int> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return FiniteSet(std::move(elems));
  }

  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }
  int min() const { return elems_.front(); }
  int max() const { return elems_.back(); }
  const std::vector<int>& elements() const { return elems_; }
  int operator[](std::size_t i) const { return elems_[i]; }

  bool contains(int v) const { return std::binary_search(elems_.begin(), elems_.end(), v); }

  bool subset_of(const FiniteSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  FiniteSet with(int v) const {
    std::vector<int> e = elems_;
    e.insert(std::upper_bound(e.begin(), e.end(), v), v);
    return FiniteSet(std::move(e));
  }

  FiniteSet slice(std::size_t begin, std::size_t end) const {
    return FiniteSet(std::vector<int>(elems_.begin() + begin, elems_.begin() + end));
  }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
  friend auto operator<=>(const FiniteSet& a, const FiniteSet& b) {
    return std::lexicographical_compare_three_way(a.elems_.begin(), a.elems_.end(),
                                                  b.elems_.begin(), b.elems_.end());
  }

  // length-lexicographic order used by enumeration output
  static bool length_lex_less(const FiniteSet& a, const FiniteSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.elems_ < b.elems_;
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(elems_[i]);
    }
    return out + "}";
  }

  static FiniteSet parse(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos; };
    auto fail = [&](const std::string& what) -> void {
      throw std::invalid_argument("set parse error at position " + std::to_string(pos) + ": " + what);
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '{') fail("expected '{'");
    ++pos;
    std::vector<int> elems;
    skip_ws();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
    } else {
      while (true) {
        skip_ws();
        if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') fail("expected integer");
        long v = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
          v = v * 10 + (text[pos] - '0');
          if (v > 1'000'000'000L) fail("integer out of range");
          ++pos;
        }
        elems.push_back(static_cast<int>(v));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == '}') {
          ++pos;
          break;
        }
        fail("expected ',' or '}'");
      }
    }
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return FiniteSet(std::move(elems));
  }

 private:
  std::vector<int> elems_;
};

}  // namespace ssindex
