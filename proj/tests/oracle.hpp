#pragma once

// Shared helpers for the test suites: a deterministic RNG wrapper (modulo
// reduction instead of std::uniform_int_distribution, whose output differs
// between standard library implementations) and brute-force reference
// evaluators used to freeze expected values.

#include <random>
#include <vector>

#include "tropica/expr.hpp"
#include "tropica/poly.hpp"
#include "tropica/rational.hpp"

namespace testutil {

using tropica::ExprPtr;
using tropica::ExtRational;
using tropica::Rat;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform-ish integer in [lo, hi]; reproducible across platforms.
  long long int_in(long long lo, long long hi) {
    return lo + static_cast<long long>(eng_() %
                                       static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Rational with small numerator and denominator in {1,2,3,4}.
  Rat rat(long long lo = -8, long long hi = 8) {
    return Rat(int_in(lo, hi), int_in(1, 4));
  }

  bool chance(int num, int den) { return int_in(1, den) <= num; }

  std::vector<Rat> point(int n, long long lo = -10, long long hi = 10) {
    std::vector<Rat> x(n);
    for (auto& c : x) c = rat(lo, hi);
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

// Random expression tree; depth-bounded, leaves are constants and variables.
// allow_bottom controls whether -inf constants may appear (they make several
// operations partial, so some suites exclude them).
inline ExprPtr random_expr(Rng& rng, int n_vars, int depth,
                           bool allow_bottom = true) {
  using namespace tropica;
  if (depth <= 0 || rng.chance(1, 4)) {
    if (rng.chance(1, 2)) return ex_var(n_vars, static_cast<int>(rng.int_in(1, n_vars)));
    if (allow_bottom && rng.chance(1, 10))
      return ex_const(n_vars, ExtRational::neg_inf());
    return ex_const(n_vars, ExtRational(rng.rat()));
  }
  switch (rng.int_in(0, 2)) {
    case 0: {
      std::vector<ExprPtr> ch;
      int k = static_cast<int>(rng.int_in(2, 3));
      for (int i = 0; i < k; ++i)
        ch.push_back(random_expr(rng, n_vars, depth - 1, allow_bottom));
      return ex_max(std::move(ch));
    }
    case 1: {
      std::vector<ExprPtr> ch;
      int k = static_cast<int>(rng.int_in(2, 3));
      for (int i = 0; i < k; ++i)
        ch.push_back(random_expr(rng, n_vars, depth - 1, allow_bottom));
      return ex_sum(std::move(ch));
    }
    default: {
      // Negation: avoid a direct -inf constant, which has no inverse.
      ExprPtr c = random_expr(rng, n_vars, depth - 1, allow_bottom);
      while (c->kind == Kind::Const && c->value.is_bottom())
        c = random_expr(rng, n_vars, depth - 1, allow_bottom);
      return ex_neg(std::move(c));
    }
  }
}

// Random polynomial with small exponents and coefficients in [-5, 5].
inline tropica::TropPoly random_poly(Rng& rng, int n, int max_terms = 8,
                                     long long max_exp = 4) {
  std::vector<std::pair<tropica::Exps, Rat>> terms;
  int k = static_cast<int>(rng.int_in(1, max_terms));
  for (int i = 0; i < k; ++i) {
    tropica::Exps e(n);
    for (auto& p : e) p = rng.int_in(0, max_exp);
    terms.emplace_back(std::move(e), Rat(rng.int_in(-10, 10), 2));
  }
  return tropica::make_poly(n, terms);
}

// Tries to extend f by one term that never strictly dominates: the midpoint
// of two lifted term points with a coefficient at most their average. The
// result is the same function with a redundant representation. Returns f
// unchanged when no parity-compatible pair shows up.
inline tropica::TropPoly add_inessential(Rng& rng, const tropica::TropPoly& f) {
  if (f.terms.size() < 2) return f;
  std::vector<std::pair<tropica::Exps, Rat>> items(f.terms.begin(),
                                                   f.terms.end());
  for (int attempt = 0; attempt < 20; ++attempt) {
    auto& [e1, c1] = items[rng.int_in(0, items.size() - 1)];
    auto& [e2, c2] = items[rng.int_in(0, items.size() - 1)];
    if (e1 == e2) continue;
    bool parity_ok = true;
    for (std::size_t i = 0; i < e1.size(); ++i)
      if ((e1[i] + e2[i]) % 2 != 0) parity_ok = false;
    if (!parity_ok) continue;
    tropica::Exps mid(e1.size());
    for (std::size_t i = 0; i < e1.size(); ++i) mid[i] = (e1[i] + e2[i]) / 2;
    if (f.terms.count(mid)) continue;
    Rat avg = (c1 + c2) / 2;
    Rat c = rng.chance(1, 3) ? avg : Rat(avg - Rat(rng.int_in(1, 4), 2));
    tropica::TropPoly g = f;
    g.terms.emplace(std::move(mid), std::move(c));
    return g;
  }
  return f;
}

}  // namespace testutil
