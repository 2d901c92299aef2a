#pragma once

// Tropical polynomials as functions Q^n -> T. A polynomial is a finite map
// from exponent vectors to rational coefficients; the empty map is the
// bottom (-inf) polynomial. Two polynomials are the same function exactly
// when their canonical forms coincide, where the canonical form keeps the
// terms that strictly dominate somewhere (the upper-hull vertices of the
// lifted Newton points). Dominance questions reduce to strict rational
// linear feasibility.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tropica/errors.hpp"
#include "tropica/linear.hpp"
#include "tropica/rational.hpp"

namespace tropica {

using Exps = std::vector<long long>;

struct TropPoly {
  int n_vars = 1;
  std::map<Exps, Rat> terms;  // exponent vector -> coefficient

  bool is_bottom() const { return terms.empty(); }
};

inline void check_exps(int n_vars, const Exps& e) {
  if (static_cast<int>(e.size()) != n_vars)
    throw Error("exponent vector has wrong length");
  for (long long p : e)
    if (p < 0) throw Error("exponents must be nonnegative");
}

inline TropPoly p_bottom(int n_vars) { return TropPoly{n_vars, {}}; }

inline TropPoly p_const(int n_vars, const Rat& c) {
  TropPoly f{n_vars, {}};
  f.terms.emplace(Exps(n_vars, 0), c);
  return f;
}

// c ⊙ X_i^power (1-based variable index).
inline TropPoly p_monomial(int n_vars, int index, long long power = 1,
                           const Rat& c = Rat(0)) {
  if (index < 1 || index > n_vars) throw VarOutOfRange(index, n_vars);
  TropPoly f{n_vars, {}};
  Exps e(n_vars, 0);
  e[index - 1] = power;
  check_exps(n_vars, e);
  f.terms.emplace(std::move(e), c);
  return f;
}

// Raw term list; keeps the max coefficient on duplicate exponents but does
// not canonicalize, so inessential terms survive (used to build inputs).
inline TropPoly make_poly(int n_vars,
                          const std::vector<std::pair<Exps, Rat>>& terms) {
  TropPoly f{n_vars, {}};
  for (const auto& [e, c] : terms) {
    check_exps(n_vars, e);
    auto [it, fresh] = f.terms.emplace(e, c);
    if (!fresh && c > it->second) it->second = c;
  }
  return f;
}

inline ExtRational p_eval(const TropPoly& f, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != f.n_vars)
    throw Error("evaluation point has wrong dimension");
  ExtRational acc = ExtRational::neg_inf();
  for (const auto& [e, c] : f.terms) {
    Rat v = c;
    for (int i = 0; i < f.n_vars; ++i) v += Rat(e[i]) * x[i];
    acc = t_add(acc, ExtRational(std::move(v)));
  }
  return acc;
}

// A point where term (e, c) takes a strictly larger value than every other
// term of f, if one exists.
inline std::optional<std::vector<Rat>> essential_witness(const TropPoly& f,
                                                         const Exps& e) {
  auto it = f.terms.find(e);
  if (it == f.terms.end()) throw Error("exponent is not a term of f");
  if (f.terms.size() == 1) return std::vector<Rat>(f.n_vars, Rat(0));
  LinSystem sys(f.n_vars);
  for (const auto& [e2, c2] : f.terms) {
    if (e2 == e) continue;
    std::vector<Rat> coef(f.n_vars);
    for (int i = 0; i < f.n_vars; ++i) coef[i] = Rat(e[i] - e2[i]);
    sys.add_gt(it->second - c2, std::move(coef));
  }
  return solve_feasible(sys);
}

inline bool is_essential(const TropPoly& f, const Exps& e) {
  return essential_witness(f, e).has_value();
}

// Keep exactly the essential terms. Removing an inessential term never
// changes the function, and essentiality of the others is unaffected, so a
// single pass suffices and the result is unique and idempotent.
inline TropPoly canonicalize(const TropPoly& f) {
  if (f.terms.size() <= 1) return f;
  TropPoly out{f.n_vars, {}};
  for (const auto& [e, c] : f.terms)
    if (is_essential(f, e)) out.terms.emplace(e, c);
  return out;
}

inline TropPoly p_add(const TropPoly& f, const TropPoly& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  TropPoly out{f.n_vars, f.terms};
  for (const auto& [e, c] : g.terms) {
    auto [it, fresh] = out.terms.emplace(e, c);
    if (!fresh && c > it->second) it->second = c;
  }
  return canonicalize(out);
}

inline TropPoly p_mul(const TropPoly& f, const TropPoly& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  TropPoly out{f.n_vars, {}};
  for (const auto& [ef, cf] : f.terms) {
    for (const auto& [eg, cg] : g.terms) {
      Exps e(f.n_vars);
      for (int i = 0; i < f.n_vars; ++i) e[i] = ef[i] + eg[i];
      Rat c = cf + cg;
      auto [it, fresh] = out.terms.emplace(std::move(e), std::move(c));
      if (!fresh && cf + cg > it->second) it->second = cf + cg;
    }
  }
  return canonicalize(out);
}

// Integer tropical power f^k (k-fold product); f^0 is the constant 0.
inline TropPoly p_pow(const TropPoly& f, long long k) {
  if (k < 0) throw Error("negative polynomial power");
  TropPoly acc = p_const(f.n_vars, Rat(0));
  for (long long i = 0; i < k; ++i) acc = p_mul(acc, f);
  return acc;
}

struct EqualityVerdict {
  std::optional<std::vector<Rat>> witness;  // disagreement point, if any

  bool equal() const { return !witness.has_value(); }
};

namespace detail {

// Point where term (e, c) of a strictly dominates all its siblings in a and
// strictly exceeds every term of b. Feasible for at least one differing term
// of two distinct canonical forms.
inline std::optional<std::vector<Rat>> separation_witness(const TropPoly& a,
                                                          const Exps& e,
                                                          const Rat& c,
                                                          const TropPoly& b) {
  LinSystem sys(a.n_vars);
  auto beat = [&](const Exps& e2, const Rat& c2) {
    std::vector<Rat> coef(a.n_vars);
    for (int i = 0; i < a.n_vars; ++i) coef[i] = Rat(e[i] - e2[i]);
    sys.add_gt(c - c2, std::move(coef));
  };
  for (const auto& [e2, c2] : a.terms)
    if (e2 != e) beat(e2, c2);
  for (const auto& [e2, c2] : b.terms) beat(e2, c2);
  return solve_feasible(sys);
}

}  // namespace detail

// Decides pointwise equality of f and g on Q^n. On inequality, produces an
// exact point where the values differ.
inline EqualityVerdict fn_equal(const TropPoly& f, const TropPoly& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  TropPoly a = canonicalize(f);
  TropPoly b = canonicalize(g);
  if (a.terms == b.terms) return {};
  const TropPoly* sides[2][2] = {{&a, &b}, {&b, &a}};
  for (auto [first, second] : sides) {
    for (const auto& [e, c] : first->terms) {
      auto it = second->terms.find(e);
      if (it != second->terms.end() && it->second == c) continue;
      auto w = detail::separation_witness(*first, e, c, *second);
      if (!w) continue;
      if (p_eval(f, *w) == p_eval(g, *w))
        throw std::logic_error("separation witness does not separate");
      return EqualityVerdict{std::move(w)};
    }
  }
  throw std::logic_error("distinct canonical forms admit no witness");
}

}  // namespace tropica
