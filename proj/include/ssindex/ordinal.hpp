#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssindex {

// Ordinals below epsilon_0 in Cantor normal form:
//
//   w^e1*c1 + w^e2*c2 + ... + w^er*cr,   e1 > e2 > ... > er,  ci >= 1,
//
// stored as the term list (empty list = 0). Exponents are ordinals of the
// same kind, so the representation is a finite tree and equality is
// structural. Arithmetic is the usual non-commutative ordinal arithmetic.
//
// Text grammar (parse accepts it, str() emits the canonical form):
//   ord  := term ('+' term)*
//   term := atom ('*' nat)?
//   atom := nat | 'w' | 'w^' atom | 'w^(' ord ')'
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;
  explicit Ordinal(std::uint64_t n);

  static Ordinal omega();
  static Ordinal omega_pow(const Ordinal& exponent);

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  std::uint64_t finite_value() const;  // requires is_finite()

  enum class Kind { Zero, Successor, Limit };
  Kind classify() const;
  Ordinal predecessor() const;  // requires Successor

  // Canonical (Wainer) fundamental sequence value at n >= 1; requires Limit.
  //   (g + w^(b+1))[n] = g + w^b * n
  //   (g + w^l)[n]     = g + w^(l[n])   for limit l
  Ordinal fundamental(std::uint64_t n) const;

  const std::vector<Term>& terms() const { return terms_; }

  std::string str() const;
  static Ordinal parse(std::string_view text);

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Term> terms_;

  static std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
  void append_atom(const std::string& s, std::size_t& pos);
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
};

inline Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back(Term{Ordinal(), n});
}

inline Ordinal Ordinal::omega() { return omega_pow(Ordinal(1)); }

inline Ordinal Ordinal::omega_pow(const Ordinal& exponent) {
  Ordinal r;
  r.terms_.push_back(Term{exponent, 1});
  return r;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw std::invalid_argument("finite_value on infinite ordinal");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

inline bool operator==(const Ordinal& a, const Ordinal& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coefficient != b.terms_[i].coefficient) return false;
    if (!(a.terms_[i].exponent == b.terms_[i].exponent)) return false;
  }
  return true;
}

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ec = a.terms_[i].exponent <=> b.terms_[i].exponent;
    if (ec != std::strong_ordering::equal) return ec;
    const auto cc = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
    if (cc != std::strong_ordering::equal) return cc;
  }
  return a.terms_.size() <=> b.terms_.size();
}

inline std::uint64_t Ordinal::checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("ordinal coefficient overflow");
  return r;
}

inline std::uint64_t Ordinal::checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("ordinal coefficient overflow");
  return r;
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  Ordinal r;
  const Ordinal& lead = b.terms_.front().exponent;
  // keep the terms of a whose exponent dominates b's leading exponent
  std::size_t keep = 0;
  while (keep < a.terms_.size() && a.terms_[keep].exponent > lead) ++keep;
  r.terms_.assign(a.terms_.begin(), a.terms_.begin() + keep);
  if (keep < a.terms_.size() && a.terms_[keep].exponent == lead) {
    r.terms_.push_back(Ordinal::Term{lead, Ordinal::checked_add(a.terms_[keep].coefficient,
                                                                b.terms_.front().coefficient)});
  } else {
    r.terms_.push_back(b.terms_.front());
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
  return r;
}

inline Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal r;
  for (const auto& bt : b.terms_) {
    if (bt.exponent.is_zero()) {
      // a * k = w^e1*(c1*k) + tail(a)
      Ordinal piece;
      piece.terms_ = a.terms_;
      piece.terms_[0].coefficient = Ordinal::checked_mul(piece.terms_[0].coefficient, bt.coefficient);
      r = r + piece;
    } else {
      // a * w^e * k = w^(e1 + e) * k
      Ordinal piece = Ordinal::omega_pow(a.terms_.front().exponent + bt.exponent);
      piece.terms_[0].coefficient = bt.coefficient;
      r = r + piece;
    }
  }
  return r;
}

inline Ordinal::Kind Ordinal::classify() const {
  if (terms_.empty()) return Kind::Zero;
  return terms_.back().exponent.is_zero() ? Kind::Successor : Kind::Limit;
}

inline Ordinal Ordinal::predecessor() const {
  if (classify() != Kind::Successor) throw std::invalid_argument("predecessor of non-successor ordinal");
  Ordinal r = *this;
  if (r.terms_.back().coefficient > 1)
    --r.terms_.back().coefficient;
  else
    r.terms_.pop_back();
  return r;
}

inline Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (classify() != Kind::Limit) throw std::invalid_argument("fundamental sequence of non-limit ordinal");
  if (n < 1) throw std::invalid_argument("fundamental sequence index must be >= 1");
  // split off one copy of the last term's w^beta
  const Term& last = terms_.back();
  Ordinal rest;
  rest.terms_.assign(terms_.begin(), terms_.end() - 1);
  if (last.coefficient > 1) rest.terms_.push_back(Term{last.exponent, last.coefficient - 1});

  const Ordinal& beta = last.exponent;
  if (beta.classify() == Kind::Successor) {
    Ordinal step = omega_pow(beta.predecessor());
    step.terms_[0].coefficient = n;
    return rest + step;
  }
  return rest + omega_pow(beta.fundamental(n));
}

namespace detail {
inline bool ordinal_atom_printable(const Ordinal& o) {
  if (o.is_finite()) return true;
  return o.terms().size() == 1 && o.terms()[0].coefficient == 1 &&
         ordinal_atom_printable(o.terms()[0].exponent);
}

inline std::string ordinal_atom_str(const Ordinal& o);

inline std::string ordinal_exponent_str(const Ordinal& e, const std::string& full) {
  if (ordinal_atom_printable(e)) return "w^" + ordinal_atom_str(e);
  return "w^(" + full + ")";
}

}  // namespace detail

inline std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += '+';
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    if (t.exponent == Ordinal(1))
      out += "w";
    else
      out += detail::ordinal_exponent_str(t.exponent, t.exponent.str());
    if (t.coefficient > 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

namespace detail {
inline std::string ordinal_atom_str(const Ordinal& o) {
  if (o.is_finite()) return std::to_string(o.finite_value());
  const Ordinal& e = o.terms()[0].exponent;
  if (e == Ordinal(1)) return "w";
  return "w^" + ordinal_atom_str(e);
}
}  // namespace detail

namespace detail {

struct OrdinalParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("ordinal parse error at position " + std::to_string(pos) + ": " + what);
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::uint64_t parse_nat() {
    skip_ws();
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') fail("expected natural number");
    std::uint64_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      const std::uint64_t d = static_cast<std::uint64_t>(text[pos] - '0');
      if (v > (UINT64_MAX - d) / 10) fail("natural number out of range");
      v = v * 10 + d;
      ++pos;
    }
    return v;
  }

  Ordinal parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("expected atom");
    if (text[pos] >= '0' && text[pos] <= '9') return Ordinal(parse_nat());
    if (text[pos] == 'w') {
      ++pos;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
          ++pos;
          Ordinal inner = parse_ord();
          if (!eat(')')) fail("expected ')'");
          return Ordinal::omega_pow(inner);
        }
        return Ordinal::omega_pow(parse_atom());
      }
      return Ordinal::omega();
    }
    fail(std::string("unexpected character '") + std::string(1, text[pos]) + "'");
  }

  Ordinal parse_term() {
    Ordinal atom = parse_atom();
    skip_ws();
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      return atom * Ordinal(parse_nat());
    }
    return atom;
  }

  Ordinal parse_ord() {
    Ordinal r = parse_term();
    while (eat('+')) r = r + parse_term();
    return r;
  }
};

}  // namespace detail

inline Ordinal Ordinal::parse(std::string_view text) {
  detail::OrdinalParser p{text};
  Ordinal r = p.parse_ord();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace ssindex
