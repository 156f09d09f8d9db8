#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ssindex/finite_set.hpp"
#include "ssindex/rational.hpp"

namespace ssindex {

// Finitely supported vector over the canonical basis (indices >= 1) with
// exact rational coordinates. Zero coordinates are never stored. Text form:
// "[1:1, 3:-2/3]"; the zero vector prints as "[]".
class RationalVector {
 public:
  RationalVector() = default;

  explicit RationalVector(const std::vector<std::pair<int, Rational>>& entries) {
    std::map<int, Rational> acc;
    for (const auto& [idx, val] : entries) {
      if (idx < 1) throw std::invalid_argument("vector indices must be >= 1");
      acc[idx] += val;
    }
    for (auto& [idx, val] : acc)
      if (val != 0) entries_.emplace_back(idx, std::move(val));
  }

  static RationalVector basis(int index) { return RationalVector({{index, Rational(1)}}); }

  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  const std::vector<std::pair<int, Rational>>& entries() const { return entries_; }

  FiniteSet support() const {
    std::vector<int> idx;
    idx.reserve(entries_.size());
    for (const auto& [i, v] : entries_) idx.push_back(i);
    return FiniteSet(std::move(idx));
  }

  Rational coeff(int index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const auto& e, int i) { return e.first < i; });
    if (it != entries_.end() && it->first == index) return it->second;
    return Rational(0);
  }

  RationalVector restrict_to(const FiniteSet& indices) const {
    std::vector<std::pair<int, Rational>> kept;
    for (const auto& e : entries_)
      if (indices.contains(e.first)) kept.push_back(e);
    RationalVector r;
    r.entries_ = std::move(kept);
    return r;
  }

  friend RationalVector operator+(const RationalVector& a, const RationalVector& b) {
    std::vector<std::pair<int, Rational>> merged = a.entries_;
    merged.insert(merged.end(), b.entries_.begin(), b.entries_.end());
    return RationalVector(merged);
  }

  friend RationalVector operator-(const RationalVector& a, const RationalVector& b) {
    return a + (Rational(-1) * b);
  }

  friend RationalVector operator*(const Rational& c, const RationalVector& v) {
    RationalVector r;
    if (c == 0) return r;
    r.entries_ = v.entries_;
    for (auto& [idx, val] : r.entries_) val *= c;
    return r;
  }

  friend bool operator==(const RationalVector&, const RationalVector&) = default;

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(entries_[i].first) + ":" + rational_str(entries_[i].second);
    }
    return out + "]";
  }

  static RationalVector parse(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos; };
    auto fail = [&](const std::string& what) -> void {
      throw std::invalid_argument("vector parse error at position " + std::to_string(pos) + ": " + what);
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '[') fail("expected '['");
    ++pos;
    std::vector<std::pair<int, Rational>> entries;
    skip_ws();
    if (pos < text.size() && text[pos] == ']') {
      ++pos;
    } else {
      while (true) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) fail("expected basis index");
        int idx = std::stoi(std::string(text.substr(start, pos - start)));
        skip_ws();
        if (pos >= text.size() || text[pos] != ':') fail("expected ':'");
        ++pos;
        start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ']') ++pos;
        if (pos >= text.size()) fail("expected ',' or ']'");
        entries.emplace_back(idx, parse_rational(text.substr(start, pos - start)));
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        ++pos;  // ']'
        break;
      }
    }
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return RationalVector(entries);
  }

 private:
  std::vector<std::pair<int, Rational>> entries_;  // sorted by index, nonzero
};

}  // namespace ssindex
