#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ssindex/linalg.hpp"
#include "ssindex/norm.hpp"
#include "ssindex/vector.hpp"

namespace ssindex {

// ---------------------------------------------------------------------------
// Diagonal-entry expressions: rational arithmetic in the basis index i.
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | primary ('^' nat)?
//   primary:= nat | 'i' | '(' expr ')'
// ---------------------------------------------------------------------------
class IndexExpr {
 public:
  static IndexExpr parse(std::string_view text) {
    Parser p{text};
    IndexExpr e;
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    e.text_ = std::string(text);
    return e;
  }

  Rational eval(int i) const { return eval_node(*root_, i); }
  const std::string& text() const { return text_; }

 private:
  struct Node {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow } op;
    Rational value;
    std::unique_ptr<Node> lhs, rhs;
    std::uint64_t exponent = 0;
  };

  std::shared_ptr<Node> root_;
  std::string text_;

  static Rational eval_node(const Node& n, int i) {
    switch (n.op) {
      case Node::Op::Const: return n.value;
      case Node::Op::Var: return Rational(i);
      case Node::Op::Add: return eval_node(*n.lhs, i) + eval_node(*n.rhs, i);
      case Node::Op::Sub: return eval_node(*n.lhs, i) - eval_node(*n.rhs, i);
      case Node::Op::Mul: return eval_node(*n.lhs, i) * eval_node(*n.rhs, i);
      case Node::Op::Div: {
        const Rational d = eval_node(*n.rhs, i);
        if (d == 0)
          throw std::invalid_argument("diagonal expression divides by zero at index " +
                                      std::to_string(i));
        return eval_node(*n.lhs, i) / d;
      }
      case Node::Op::Neg: return -eval_node(*n.lhs, i);
      case Node::Op::Pow: {
        Rational base = eval_node(*n.lhs, i);
        Rational r = 1;
        for (std::uint64_t t = 0; t < n.exponent; ++t) r *= base;
        return r;
      }
    }
    throw std::logic_error("unreachable expression node");
  }

  struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    [[noreturn]] void fail(const std::string& what) {
      throw std::invalid_argument("expression parse error at position " + std::to_string(pos) +
                                  ": " + what);
    }
    bool peek(char c) {
      skip_ws();
      return pos < text.size() && text[pos] == c;
    }
    bool eat(char c) {
      if (peek(c)) {
        ++pos;
        return true;
      }
      return false;
    }

    std::unique_ptr<Node> make(Node::Op op, std::unique_ptr<Node> l = nullptr,
                               std::unique_ptr<Node> r = nullptr) {
      auto n = std::make_unique<Node>();
      n->op = op;
      n->lhs = std::move(l);
      n->rhs = std::move(r);
      return n;
    }

    std::unique_ptr<Node> parse_primary() {
      skip_ws();
      if (pos >= text.size()) fail("expected expression");
      if (text[pos] == 'i') {
        ++pos;
        return make(Node::Op::Var);
      }
      if (text[pos] == '(') {
        ++pos;
        auto inner = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return inner;
      }
      if (text[pos] >= '0' && text[pos] <= '9') {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        auto n = make(Node::Op::Const);
        n->value = Rational(Integer(std::string(text.substr(start, pos - start))));
        return n;
      }
      fail(std::string("unexpected character '") + std::string(1, text[pos]) + "'");
    }

    std::unique_ptr<Node> parse_factor() {
      skip_ws();
      if (pos < text.size() && text[pos] == '-') {
        ++pos;
        return make(Node::Op::Neg, parse_factor());
      }
      auto base = parse_primary();
      if (eat('^')) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (start == pos) fail("expected exponent");
        auto n = make(Node::Op::Pow, std::move(base));
        n->exponent = std::stoull(std::string(text.substr(start, pos - start)));
        return n;
      }
      return base;
    }

    std::unique_ptr<Node> parse_term() {
      auto lhs = parse_factor();
      while (true) {
        if (eat('*'))
          lhs = make(Node::Op::Mul, std::move(lhs), parse_factor());
        else if (eat('/'))
          lhs = make(Node::Op::Div, std::move(lhs), parse_factor());
        else
          return lhs;
      }
    }

    std::unique_ptr<Node> parse_expr() {
      auto lhs = parse_term();
      while (true) {
        if (eat('+'))
          lhs = make(Node::Op::Add, std::move(lhs), parse_term());
        else if (eat('-'))
          lhs = make(Node::Op::Sub, std::move(lhs), parse_term());
        else
          return lhs;
      }
    }
  };
};

// ---------------------------------------------------------------------------
// Operators between sequence spaces. The action is column-finite: every
// basis image is finitely supported. Spec file format (line oriented):
//   domain <norm-descriptor>
//   codomain <norm-descriptor>
//   action identity
//   action diagonal <expr in i>
//   action matrix <path>          (triples "row col value", identity tail)
// '#' starts a comment; blank lines are ignored.
// ---------------------------------------------------------------------------
class Operator {
 public:
  enum class ActionKind { Identity, Diagonal, Matrix };

  static Operator identity(NormDescriptor dom, NormDescriptor cod) {
    Operator op;
    op.domain_ = std::move(dom);
    op.codomain_ = std::move(cod);
    op.kind_ = ActionKind::Identity;
    return op;
  }

  static Operator diagonal(NormDescriptor dom, NormDescriptor cod, IndexExpr expr) {
    Operator op;
    op.domain_ = std::move(dom);
    op.codomain_ = std::move(cod);
    op.kind_ = ActionKind::Diagonal;
    op.diag_ = std::move(expr);
    return op;
  }

  static Operator matrix(NormDescriptor dom, NormDescriptor cod,
                         const std::vector<std::tuple<int, int, Rational>>& triples) {
    Operator op;
    op.domain_ = std::move(dom);
    op.codomain_ = std::move(cod);
    op.kind_ = ActionKind::Matrix;
    int bound = 0;
    for (const auto& [row, col, value] : triples) {
      if (row < 1 || col < 1) throw std::invalid_argument("matrix indices must be >= 1");
      bound = std::max(bound, std::max(row, col));
      if (value != 0) op.columns_[col].emplace_back(row, value);
    }
    op.explicit_bound_ = bound;
    return op;
  }

  const NormDescriptor& domain() const { return domain_; }
  const NormDescriptor& codomain() const { return codomain_; }
  ActionKind kind() const { return kind_; }

  std::string action_str() const {
    switch (kind_) {
      case ActionKind::Identity: return "identity";
      case ActionKind::Diagonal: return "diagonal " + diag_->text();
      case ActionKind::Matrix: return "matrix (" + std::to_string(explicit_bound_) + " explicit columns)";
    }
    return {};
  }

  /// Image of the basis vector e_j.
  RationalVector column(int j) const {
    switch (kind_) {
      case ActionKind::Identity:
        return RationalVector::basis(j);
      case ActionKind::Diagonal: {
        const Rational d = diag_->eval(j);
        return d * RationalVector::basis(j);
      }
      case ActionKind::Matrix: {
        if (j > explicit_bound_) return RationalVector::basis(j);
        auto it = columns_.find(j);
        if (it == columns_.end()) return RationalVector();  // explicit zero column
        return RationalVector(it->second);
      }
    }
    throw std::logic_error("unreachable action kind");
  }

  RationalVector apply(const RationalVector& x) const {
    RationalVector y;
    for (const auto& [j, v] : x.entries()) y = y + v * column(j);
    return y;
  }

  static Operator parse(std::string_view text,
                        const std::function<std::string(const std::string&)>& read_file) {
    std::optional<NormDescriptor> dom, cod;
    std::optional<std::string> action_line;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string keyword;
      if (!(ls >> keyword)) continue;
      std::string rest;
      std::getline(ls, rest);
      const auto start = rest.find_first_not_of(" \t");
      rest = start == std::string::npos ? std::string() : rest.substr(start);
      if (keyword == "domain")
        dom = NormDescriptor::parse(rest);
      else if (keyword == "codomain")
        cod = NormDescriptor::parse(rest);
      else if (keyword == "action")
        action_line = rest;
      else
        throw std::invalid_argument("unknown operator spec keyword '" + keyword + "'");
    }
    if (!dom) throw std::invalid_argument("operator spec is missing 'domain'");
    if (!cod) throw std::invalid_argument("operator spec is missing 'codomain'");
    if (!action_line) throw std::invalid_argument("operator spec is missing 'action'");

    std::istringstream as(*action_line);
    std::string verb;
    as >> verb;
    std::string rest;
    std::getline(as, rest);
    const auto start = rest.find_first_not_of(" \t");
    rest = start == std::string::npos ? std::string() : rest.substr(start);
    if (verb == "identity") return identity(*dom, *cod);
    if (verb == "diagonal") return diagonal(*dom, *cod, IndexExpr::parse(rest));
    if (verb == "matrix") {
      if (rest.empty()) throw std::invalid_argument("action matrix needs a file path");
      return matrix(*dom, *cod, parse_matrix_triples(read_file(rest)));
    }
    throw std::invalid_argument("unknown action '" + verb + "'");
  }

  static Operator parse_file(const std::string& path) {
    auto read_file = [](const std::string& p) -> std::string {
      std::ifstream f(p);
      if (!f) throw std::invalid_argument("cannot open file '" + p + "'");
      std::ostringstream ss;
      ss << f.rdbuf();
      return ss.str();
    };
    return parse(read_file(path), read_file);
  }

  static std::vector<std::tuple<int, int, Rational>> parse_matrix_triples(std::string_view text) {
    std::vector<std::tuple<int, int, Rational>> triples;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      int row, col;
      std::string value;
      if (!(ls >> row)) continue;
      if (!(ls >> col >> value))
        throw std::invalid_argument("matrix line needs 'row col value': '" + line + "'");
      triples.emplace_back(row, col, parse_rational(value));
    }
    return triples;
  }

 private:
  NormDescriptor domain_;
  NormDescriptor codomain_;
  ActionKind kind_ = ActionKind::Identity;
  std::optional<IndexExpr> diag_;
  std::map<int, std::vector<std::pair<int, Rational>>> columns_;
  int explicit_bound_ = 0;
};

// ---------------------------------------------------------------------------
// Finite front segment of a normalized basic sequence. Vectors are scaled
// to domain norm one whenever the norm value is an exact rational (always
// the case outside l2); otherwise the vector is kept unscaled and its exact
// squared norm is stored. Ratio computations are scale-invariant, so the
// stored normalization never affects search results.
// ---------------------------------------------------------------------------
class BasicSequence {
 public:
  static BasicSequence basis_range(const NormDescriptor& domain, int count,
                                   SchreierCache& cache = global_schreier_cache()) {
    std::vector<RationalVector> vecs;
    vecs.reserve(count);
    for (int i = 1; i <= count; ++i) vecs.push_back(RationalVector::basis(i));
    return from_vectors(domain, std::move(vecs), true, cache);
  }

  static BasicSequence from_vectors(const NormDescriptor& domain,
                                    std::vector<RationalVector> vecs, bool block,
                                    SchreierCache& cache = global_schreier_cache()) {
    if (vecs.empty()) throw std::invalid_argument("basic sequence must be nonempty");
    BasicSequence seq;
    seq.block_ = block;
    for (std::size_t t = 0; t < vecs.size(); ++t) {
      if (vecs[t].is_zero()) throw std::invalid_argument("basic sequence vectors must be nonzero");
      if (block && t > 0 && vecs[t - 1].support().max() >= vecs[t].support().min())
        throw std::invalid_argument("block sequence requires strictly increasing supports");
      const NormValue n = norm(domain, vecs[t], cache);
      if (n.is_exact()) {
        seq.vectors_.push_back(Rational(1) / n.value() * vecs[t]);
        seq.norm_squares_.push_back(Rational(1));
      } else {
        seq.vectors_.push_back(std::move(vecs[t]));
        seq.norm_squares_.push_back(n.square());
      }
    }
    if (!block) {
      // general sequences must still be linearly independent
      std::vector<int> ambient;
      for (const auto& v : seq.vectors_)
        for (const auto& [i, val] : v.entries()) ambient.push_back(i);
      std::sort(ambient.begin(), ambient.end());
      ambient.erase(std::unique(ambient.begin(), ambient.end()), ambient.end());
      RatMat m = mat_zero(ambient.size(), seq.vectors_.size());
      for (std::size_t t = 0; t < seq.vectors_.size(); ++t)
        for (const auto& [i, val] : seq.vectors_[t].entries()) {
          const auto r = std::lower_bound(ambient.begin(), ambient.end(), i) - ambient.begin();
          m[static_cast<std::size_t>(r)][t] = val;
        }
      if (mat_rank(std::move(m)) < seq.vectors_.size())
        throw std::invalid_argument("basic sequence vectors must be linearly independent");
    }
    return seq;
  }

  std::size_t size() const { return vectors_.size(); }
  bool is_block() const { return block_; }

  /// 1-based access, matching the index tuples of witness trees.
  const RationalVector& at(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > vectors_.size())
      throw std::invalid_argument("sequence index out of range");
    return vectors_[static_cast<std::size_t>(index) - 1];
  }

  const Rational& norm_square(int index) const {
    return norm_squares_[static_cast<std::size_t>(index) - 1];
  }

 private:
  std::vector<RationalVector> vectors_;
  std::vector<Rational> norm_squares_;  // stored exact squared domain norms
  bool block_ = true;
};

}  // namespace ssindex
