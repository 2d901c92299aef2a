#pragma once

// The fraction semifield over tropical polynomial functions. A RatFn is
// num/den with both parts canonical and den nonempty; the bottom element has
// an empty numerator. Equality is cross-multiplication, so every verdict
// reduces to fn_equal on polynomials and witnesses transfer unchanged.
// Also home to the bridge from the expression front-end (lowering) and back
// (printing a fraction as "num - den").

#include <string>
#include <utility>
#include <vector>

#include "tropica/errors.hpp"
#include "tropica/expr.hpp"
#include "tropica/poly.hpp"

namespace tropica {

struct RatFn {
  int n_vars = 1;
  TropPoly num;  // canonical; empty <=> bottom element
  TropPoly den;  // canonical; never empty

  bool is_bottom() const { return num.is_bottom(); }
};

// Canonicalizing constructor; the only way den may be empty is a bug in the
// caller, reported as division by the bottom polynomial.
inline RatFn r_make(TropPoly num, TropPoly den) {
  if (num.n_vars != den.n_vars) throw Error("mixed variable counts");
  if (den.is_bottom()) throw BottomInverse();
  RatFn r;
  r.n_vars = num.n_vars;
  r.num = canonicalize(std::move(num));
  r.den = canonicalize(std::move(den));
  return r;
}

inline RatFn r_bottom(int n_vars) {
  return r_make(p_bottom(n_vars), p_const(n_vars, Rat(0)));
}

inline RatFn r_const(int n_vars, const ExtRational& c) {
  if (c.is_bottom()) return r_bottom(n_vars);
  return r_make(p_const(n_vars, c.value()), p_const(n_vars, Rat(0)));
}

inline RatFn r_var(int n_vars, int index) {
  return r_make(p_monomial(n_vars, index), p_const(n_vars, Rat(0)));
}

inline RatFn r_from_poly(TropPoly p) {
  int n = p.n_vars;
  return r_make(std::move(p), p_const(n, Rat(0)));
}

inline ExtRational r_eval(const RatFn& f, const std::vector<Rat>& x) {
  ExtRational num = p_eval(f.num, x);
  if (num.is_bottom()) return num;
  return t_mul(num, t_inv(p_eval(f.den, x)));
}

inline RatFn r_add(const RatFn& f, const RatFn& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  return r_make(p_add(p_mul(f.num, g.den), p_mul(g.num, f.den)),
                p_mul(f.den, g.den));
}

inline RatFn r_mul(const RatFn& f, const RatFn& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  return r_make(p_mul(f.num, g.num), p_mul(f.den, g.den));
}

inline RatFn r_inv(const RatFn& f) {
  if (f.is_bottom()) throw BottomInverse();
  return r_make(f.den, f.num);
}

// f^k for integer k (negative powers invert first).
inline RatFn r_pow(const RatFn& f, long long k) {
  if (k < 0) return r_pow(r_inv(f), -k);
  RatFn acc = r_const(f.n_vars, ExtRational(Rat(0)));
  for (long long i = 0; i < k; ++i) acc = r_mul(acc, f);
  return acc;
}

inline EqualityVerdict r_equal(const RatFn& f, const RatFn& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  EqualityVerdict v = fn_equal(p_mul(f.num, g.den), p_mul(g.num, f.den));
  if (!v.equal() && r_eval(f, *v.witness) == r_eval(g, *v.witness))
    throw std::logic_error("cross-multiplication witness does not transfer");
  return v;
}

// f(g_1, ..., g_n): substitute the tuple g into f. Total unless the
// composed denominator collapses to the bottom element, which can only
// happen when some g_i is itself bottom and the denominator mentions X_i.
inline RatFn substitute(const RatFn& f, const std::vector<RatFn>& g) {
  if (static_cast<int>(g.size()) != f.n_vars)
    throw Error("substitution tuple has wrong length");
  int m = g.empty() ? 1 : g.front().n_vars;
  for (const auto& gi : g)
    if (gi.n_vars != m) throw Error("mixed variable counts");

  auto eval_poly = [&](const TropPoly& p) {
    RatFn acc = r_bottom(m);
    for (const auto& [e, c] : p.terms) {
      RatFn term = r_const(m, ExtRational(c));
      for (int i = 0; i < f.n_vars; ++i)
        if (e[i] > 0) term = r_mul(term, r_pow(g[i], e[i]));
      acc = r_add(acc, term);
    }
    return acc;
  };

  RatFn num = eval_poly(f.num);
  RatFn den = eval_poly(f.den);
  return r_mul(num, r_inv(den));
}

// ---------------------------------------------------------------------------
// Lowering expressions to fractions and printing fractions as expressions.

inline RatFn lower_to_ratfn(const ExprPtr& e) {
  switch (e->kind) {
    case Kind::Const:
      return r_const(e->n_vars, e->value);
    case Kind::Var:
      return r_var(e->n_vars, e->index);
    case Kind::Max: {
      RatFn acc = r_bottom(e->n_vars);
      for (const auto& c : e->children) acc = r_add(acc, lower_to_ratfn(c));
      return acc;
    }
    case Kind::Sum: {
      RatFn acc = r_const(e->n_vars, ExtRational(Rat(0)));
      for (const auto& c : e->children) acc = r_mul(acc, lower_to_ratfn(c));
      return acc;
    }
    case Kind::Neg:
      return r_inv(lower_to_ratfn(e->children[0]));
  }
  throw std::logic_error("unreachable expression kind");
}

inline ExprPtr poly_to_expr(const TropPoly& f) {
  int n = f.n_vars;
  if (f.is_bottom()) return ex_const(n, ExtRational::neg_inf());
  std::vector<ExprPtr> alts;
  for (const auto& [e, c] : f.terms) {
    std::vector<ExprPtr> parts;
    bool has_var = false;
    for (int i = 0; i < n; ++i) has_var = has_var || e[i] > 0;
    if (c != 0 || !has_var) parts.push_back(ex_const(n, ExtRational(c)));
    for (int i = 0; i < n; ++i)
      for (long long k = 0; k < e[i]; ++k) parts.push_back(ex_var(n, i + 1));
    alts.push_back(parts.size() == 1 ? std::move(parts.front())
                                     : ex_sum(std::move(parts)));
  }
  return alts.size() == 1 ? std::move(alts.front()) : ex_max(std::move(alts));
}

inline ExprPtr ratfn_to_expr(const RatFn& r) {
  if (r.is_bottom()) return ex_const(r.n_vars, ExtRational::neg_inf());
  ExprPtr num = poly_to_expr(r.num);
  bool den_is_zero = r.den.terms.size() == 1 &&
                     r.den.terms.begin()->first == Exps(r.n_vars, 0) &&
                     r.den.terms.begin()->second == 0;
  if (den_is_zero) return num;
  return ex_sum({std::move(num), ex_neg(poly_to_expr(r.den))});
}

inline std::string ratfn_text(const RatFn& r) {
  return print_expr(ratfn_to_expr(r));
}

}  // namespace tropica
