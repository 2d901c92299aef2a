#pragma once

// Expression front-end: AST, parser, printer and structural evaluation over
// the max-plus scalars. Concrete grammar (whitespace-insensitive):
//
//   expr := sum ;
//   sum  := prod (("+"|"-") prod)* ;
//   prod := INT "*" atom | atom ;
//   atom := RATIONAL | "-inf" | VAR
//         | "max" "(" expr ("," expr)+ ")"
//         | "min" "(" expr ("," expr)+ ")"
//         | "(" expr ")" ;
//   VAR  := "x" POSINT ;   RATIONAL := ["-"] INT ["/" POSINT] ;
//
// "+" is the semifield product (classical addition), "-" its inverse.
// min(...) is sugar for the negated max of negated arguments and k*a is
// sugar for a k-fold sum; neither survives into the AST. Negation of a
// constant folds into the constant, so parsed trees carry Neg nodes only
// where an inverse is structurally required.

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tropica/errors.hpp"
#include "tropica/rational.hpp"

namespace tropica {

enum class Kind { Const, Var, Max, Sum, Neg };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Kind kind;
  int n_vars;
  ExtRational value;             // Const
  int index = 0;                 // Var, 1-based
  std::vector<ExprPtr> children; // Max/Sum (>= 1), Neg (exactly 1)
};

inline ExprPtr ex_const(int n_vars, ExtRational v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->n_vars = n_vars;
  e->value = std::move(v);
  return e;
}

inline ExprPtr ex_var(int n_vars, int index) {
  if (index < 1 || index > n_vars) throw VarOutOfRange(index, n_vars);
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->n_vars = n_vars;
  e->index = index;
  return e;
}

namespace detail {
inline ExprPtr ex_nary(Kind k, std::vector<ExprPtr> children) {
  if (children.empty()) throw Error("empty operand list");
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->n_vars = children.front()->n_vars;
  for (const auto& c : children)
    if (c->n_vars != e->n_vars) throw Error("mixed variable counts");
  e->children = std::move(children);
  return e;
}
}  // namespace detail

inline ExprPtr ex_max(std::vector<ExprPtr> children) {
  return detail::ex_nary(Kind::Max, std::move(children));
}

inline ExprPtr ex_sum(std::vector<ExprPtr> children) {
  return detail::ex_nary(Kind::Sum, std::move(children));
}

inline ExprPtr ex_neg(ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->n_vars = child->n_vars;
  e->children.push_back(std::move(child));
  return e;
}

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind || a->n_vars != b->n_vars) return false;
  switch (a->kind) {
    case Kind::Const:
      return a->value == b->value;
    case Kind::Var:
      return a->index == b->index;
    default:
      break;
  }
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  return true;
}

inline ExtRational eval_expr(const ExprPtr& e, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != e->n_vars)
    throw Error("evaluation point has wrong dimension");
  switch (e->kind) {
    case Kind::Const:
      return e->value;
    case Kind::Var:
      return ExtRational(x[e->index - 1]);
    case Kind::Max: {
      ExtRational acc = ExtRational::neg_inf();
      for (const auto& c : e->children) acc = t_add(acc, eval_expr(c, x));
      return acc;
    }
    case Kind::Sum: {
      ExtRational acc(Rat(0));
      for (const auto& c : e->children) acc = t_mul(acc, eval_expr(c, x));
      return acc;
    }
    case Kind::Neg:
      return t_inv(eval_expr(e->children[0], x));
  }
  throw std::logic_error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

struct Token {
  enum Type { Num, Word, Punct, End } type;
  std::string text;   // Num / Word
  char punct = 0;     // Punct
  std::size_t pos = 0;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Num, s.substr(i, j - i), 0, i});
      i = j;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() &&
             std::isalnum(static_cast<unsigned char>(s[j])))
        ++j;
      out.push_back({Token::Word, s.substr(i, j - i), 0, i});
      i = j;
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/':
      case '(': case ')': case ',':
        out.push_back({Token::Punct, std::string(1, s[i]), static_cast<char>(c), i});
        ++i;
        break;
      default:
        throw SyntaxError("unexpected character", i);
    }
  }
  out.push_back({Token::End, "", 0, s.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, int n_vars)
      : toks_(tokenize(text)), n_(n_vars) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    if (peek().type != Token::End)
      throw SyntaxError("trailing input", peek().pos);
    return e;
  }

 private:
  static constexpr long kScalarCap = 4096;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_punct(char c, std::size_t ahead = 0) const {
    return peek(ahead).type == Token::Punct && peek(ahead).punct == c;
  }

  void expect_punct(char c, const char* what) {
    if (!at_punct(c)) throw SyntaxError(std::string("expected ") + what, peek().pos);
    take();
  }

  long parse_digits(const std::string& digits, std::size_t pos, long cap) const {
    long v = 0;
    for (char ch : digits) {
      v = v * 10 + (ch - '0');
      if (v > cap) throw SyntaxError("integer too large", pos);
    }
    return v;
  }

  // Negation during desugaring: constants fold, everything else gets a Neg
  // node. The bottom constant has no inverse, so it cannot be negated.
  ExprPtr negated(ExprPtr e, std::size_t pos) const {
    if (e->kind == Kind::Const) {
      if (e->value.is_bottom())
        throw SyntaxError("cannot negate -inf", pos);
      return ex_const(n_, ExtRational(-e->value.value()));
    }
    return ex_neg(std::move(e));
  }

  ExprPtr parse_sum() {
    std::vector<ExprPtr> children;
    children.push_back(parse_prod());
    while (at_punct('+') || at_punct('-')) {
      Token op = take();
      ExprPtr rhs = parse_prod();
      children.push_back(op.punct == '-' ? negated(std::move(rhs), op.pos)
                                         : std::move(rhs));
    }
    if (children.size() == 1) return std::move(children.front());
    return ex_sum(std::move(children));
  }

  ExprPtr parse_prod() {
    if (peek().type == Token::Num && at_punct('*', 1)) {
      Token k = take();
      take();  // '*'
      long count = parse_digits(k.text, k.pos, kScalarCap);
      ExprPtr a = parse_atom();
      if (count == 0) return ex_const(n_, ExtRational(Rat(0)));
      if (count == 1) return a;
      std::vector<ExprPtr> copies(static_cast<std::size_t>(count), a);
      return ex_sum(std::move(copies));
    }
    return parse_atom();
  }

  Rat parse_rational_tokens(bool negative) {
    Token num = take();
    Rat p(num.text);
    if (at_punct('/')) {
      take();
      if (peek().type != Token::Num)
        throw SyntaxError("expected denominator", peek().pos);
      Token den = take();
      Rat d(den.text);
      if (d == 0) throw SyntaxError("zero denominator", den.pos);
      p /= d;
    }
    return negative ? Rat(-p) : p;
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    if (t.type == Token::Punct && t.punct == '(') {
      take();
      ExprPtr e = parse_sum();
      expect_punct(')', "')'");
      return e;
    }
    if (t.type == Token::Punct && t.punct == '-') {
      Token minus = take();
      if (peek().type == Token::Num)
        return ex_const(n_, ExtRational(parse_rational_tokens(true)));
      if (peek().type == Token::Word && peek().text == "inf") {
        take();
        return ex_const(n_, ExtRational::neg_inf());
      }
      throw SyntaxError("expected number or inf after '-'", minus.pos);
    }
    if (t.type == Token::Num)
      return ex_const(n_, ExtRational(parse_rational_tokens(false)));
    if (t.type == Token::Word) {
      if (t.text == "max" || t.text == "min") {
        bool is_min = t.text == "min";
        std::size_t head = t.pos;
        take();
        expect_punct('(', "'('");
        std::vector<ExprPtr> args;
        args.push_back(parse_sum());
        while (at_punct(',')) {
          take();
          args.push_back(parse_sum());
        }
        expect_punct(')', "')'");
        if (args.size() < 2)
          throw SyntaxError(std::string(is_min ? "min" : "max") +
                                " needs at least two arguments",
                            head);
        if (!is_min) return ex_max(std::move(args));
        for (auto& a : args) a = negated(std::move(a), head);
        return ex_neg(ex_max(std::move(args)));
      }
      if (t.text.size() > 1 && t.text[0] == 'x') {
        bool digits = true;
        for (std::size_t i = 1; i < t.text.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
        if (digits) {
          take();
          long idx = parse_digits(t.text.substr(1), t.pos, 1000000);
          if (idx < 1) throw SyntaxError("variable index must be positive", t.pos);
          if (idx > n_) throw VarOutOfRange(static_cast<int>(idx), n_);
          return ex_var(n_, static_cast<int>(idx));
        }
      }
      throw SyntaxError("unknown name '" + t.text + "'", t.pos);
    }
    throw SyntaxError("expected expression", t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int n_;
};

}  // namespace detail

inline ExprPtr parse(const std::string& text, int n_vars) {
  if (n_vars < 1) throw Error("n_vars must be positive");
  return detail::Parser(text, n_vars).run();
}

// ---------------------------------------------------------------------------
// Printer. parse(print(parse(s))) == parse(s) for every string s in the
// grammar; for hand-built trees outside the parser's image the printed form
// still evaluates to the same function, falling back to "0 - u" where a bare
// inverse has no concrete spelling.

namespace detail {

// A Neg produced by min-desugaring: inverse of a max whose operands are all
// constants or inverses.
inline bool is_min_pattern(const Expr& e) {
  if (e.kind != Kind::Neg) return false;
  const Expr& m = *e.children[0];
  if (m.kind != Kind::Max || m.children.size() < 2) return false;
  for (const auto& c : m.children) {
    if (c->kind == Kind::Neg) continue;
    if (c->kind == Kind::Const && !c->value.is_bottom()) continue;
    return false;
  }
  return true;
}

inline std::string print_rec(const Expr& e);

// Can the printed form stand in atom position without parentheses?
inline bool prints_atomic(const Expr& e) {
  switch (e.kind) {
    case Kind::Const:
    case Kind::Var:
      return true;
    case Kind::Max:
    case Kind::Sum:
      return e.children.size() == 1 ? prints_atomic(*e.children[0])
                                    : e.kind == Kind::Max;
    case Kind::Neg:
      return is_min_pattern(e);
  }
  return false;
}

inline std::string print_atom(const Expr& e) {
  std::string s = print_rec(e);
  return prints_atomic(e) ? s : "(" + s + ")";
}

inline std::string print_min(const Expr& e) {
  std::string out = "min(";
  const Expr& m = *e.children[0];
  for (std::size_t i = 0; i < m.children.size(); ++i) {
    if (i) out += ", ";
    const Expr& c = *m.children[i];
    out += c.kind == Kind::Neg ? print_rec(*c.children[0])
                               : rat_string(-c.value.value());
  }
  return out + ")";
}

inline std::string print_rec(const Expr& e) {
  switch (e.kind) {
    case Kind::Const:
      return e.value.str();
    case Kind::Var:
      return "x" + std::to_string(e.index);
    case Kind::Max: {
      if (e.children.size() == 1) return print_rec(*e.children[0]);
      std::string out = "max(";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ", ";
        out += print_rec(*e.children[i]);
      }
      return out + ")";
    }
    case Kind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        const Expr& c = *e.children[i];
        if (i == 0) {
          out = c.kind == Kind::Neg && !is_min_pattern(c)
                    ? "0 - " + print_atom(*c.children[0])
                    : print_atom(c);
        } else if (c.kind == Kind::Neg && !is_min_pattern(c)) {
          out += " - " + print_atom(*c.children[0]);
        } else {
          out += " + " + print_atom(c);
        }
      }
      return out;
    }
    case Kind::Neg:
      if (is_min_pattern(e)) return print_min(e);
      return "0 - " + print_atom(*e.children[0]);
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace detail

inline std::string print_expr(const ExprPtr& e) { return detail::print_rec(*e); }

}  // namespace tropica
