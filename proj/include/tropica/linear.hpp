#pragma once

// Systems of affine constraints over exact rationals and a Fourier-Motzkin
// feasibility decision that also extracts an exact witness point. Strict
// inequalities are tracked through eliminations, so strict-dominance systems
// are decided soundly. Redundancy control keeps one strongest constraint per
// normalized linear part, which is what makes repeated elimination viable at
// the dimensions used here (n <= 3, a few dozen rows).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tropica/rational.hpp"

namespace tropica {

enum class Rel { Eq, Ge, Gt };  // c0 + <coef, x>  (=, >=, >)  0

struct LinConstraint {
  Rat c0;
  std::vector<Rat> coef;
  Rel rel = Rel::Ge;
};

class LinSystem {
 public:
  explicit LinSystem(int n) : n_(n) {}

  int n_vars() const { return n_; }
  const std::vector<LinConstraint>& rows() const { return rows_; }

  void add(LinConstraint c) {
    if (static_cast<int>(c.coef.size()) != n_)
      throw Error("constraint dimension mismatch");
    rows_.push_back(std::move(c));
  }

  void add(const Rat& c0, std::vector<Rat> coef, Rel rel) {
    add(LinConstraint{c0, std::move(coef), rel});
  }

  // c0 + <coef, x> == 0
  void add_eq(const Rat& c0, std::vector<Rat> coef) { add(c0, std::move(coef), Rel::Eq); }
  // c0 + <coef, x> >= 0
  void add_ge(const Rat& c0, std::vector<Rat> coef) { add(c0, std::move(coef), Rel::Ge); }
  // c0 + <coef, x> > 0
  void add_gt(const Rat& c0, std::vector<Rat> coef) { add(c0, std::move(coef), Rel::Gt); }

  bool satisfies(const std::vector<Rat>& x) const {
    for (const auto& r : rows_) {
      Rat v = r.c0;
      for (int i = 0; i < n_; ++i) v += r.coef[i] * x[i];
      switch (r.rel) {
        case Rel::Eq:
          if (v != 0) return false;
          break;
        case Rel::Ge:
          if (v < 0) return false;
          break;
        case Rel::Gt:
          if (v <= 0) return false;
          break;
      }
    }
    return true;
  }

 private:
  int n_;
  std::vector<LinConstraint> rows_;
};

namespace detail {

// Inequality c0 + <coef, x> >= 0 (or > 0 when strict).
struct FmRow {
  Rat c0;
  std::vector<Rat> coef;
  bool strict = false;
};

inline int first_nonzero(const std::vector<Rat>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return static_cast<int>(i);
  return -1;
}

// Returns false when the constant-only row is unsatisfiable.
inline bool constant_row_ok(const FmRow& r) {
  return r.strict ? r.c0 > 0 : r.c0 >= 0;
}

// Scale so the first nonzero coefficient has absolute value 1, then keep only
// the strongest constant per linear part. Returns false on contradiction.
inline bool normalize_rows(std::vector<FmRow>& rows) {
  std::map<std::vector<Rat>, std::pair<Rat, bool>> best;
  for (auto& r : rows) {
    int j = first_nonzero(r.coef);
    if (j < 0) {
      if (!constant_row_ok(r)) return false;
      continue;
    }
    Rat scale = abs(r.coef[j]);
    if (scale != 1) {
      r.c0 /= scale;
      for (auto& c : r.coef) c /= scale;
    }
    auto it = best.find(r.coef);
    if (it == best.end()) {
      best.emplace(std::move(r.coef), std::make_pair(std::move(r.c0), r.strict));
    } else {
      auto& [c0, strict] = it->second;
      if (r.c0 < c0) {
        c0 = r.c0;
        strict = r.strict;
      } else if (r.c0 == c0) {
        strict = strict || r.strict;
      }
    }
  }
  rows.clear();
  for (auto& [coef, cs] : best)
    rows.push_back(FmRow{cs.first, coef, cs.second});
  return true;
}

struct Elimination {
  int var;
  std::vector<FmRow> lowers;  // coef[var] > 0
  std::vector<FmRow> uppers;  // coef[var] < 0
};

struct Substitution {
  int var;
  Rat c0;              // var = c0 + <coef, x>
  std::vector<Rat> coef;
};

}  // namespace detail

// Decides feasibility; on success returns an exact satisfying point.
inline std::optional<std::vector<Rat>> solve_feasible(const LinSystem& sys) {
  using detail::FmRow;
  const int n = sys.n_vars();

  std::vector<FmRow> rows;
  std::vector<detail::FmRow> eqs;  // c0 + <coef,x> == 0
  for (const auto& r : sys.rows()) {
    if (r.rel == Rel::Eq)
      eqs.push_back(FmRow{r.c0, r.coef, false});
    else
      rows.push_back(FmRow{r.c0, r.coef, r.rel == Rel::Gt});
  }

  std::vector<bool> active(n, true);
  std::vector<detail::Substitution> subs;

  // Equalities: Gaussian substitution, one variable at a time.
  while (true) {
    int pick = -1, var = -1;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      int j = detail::first_nonzero(eqs[i].coef);
      if (j >= 0) {
        pick = static_cast<int>(i);
        var = j;
        break;
      }
    }
    if (pick < 0) break;
    FmRow eq = std::move(eqs[pick]);
    eqs.erase(eqs.begin() + pick);
    Rat d = eq.coef[var];
    detail::Substitution s;
    s.var = var;
    s.c0 = -eq.c0 / d;
    s.coef.assign(n, Rat(0));
    for (int k = 0; k < n; ++k)
      if (k != var) s.coef[k] = -eq.coef[k] / d;
    auto apply = [&](FmRow& r) {
      Rat f = r.coef[var];
      if (f == 0) return;
      r.c0 += f * s.c0;
      for (int k = 0; k < n; ++k) r.coef[k] += f * s.coef[k];
      r.coef[var] = 0;
    };
    for (auto& r : eqs) apply(r);
    for (auto& r : rows) apply(r);
    active[var] = false;
    subs.push_back(std::move(s));
  }
  for (const auto& r : eqs)
    if (r.c0 != 0) return std::nullopt;

  if (!detail::normalize_rows(rows)) return std::nullopt;

  // Fourier-Motzkin on the remaining inequalities.
  std::vector<detail::Elimination> elims;
  while (true) {
    int var = -1;
    std::size_t best_cost = 0;
    for (int j = 0; j < n; ++j) {
      if (!active[j]) continue;
      std::size_t pos = 0, non = 0;
      for (const auto& r : rows) {
        if (r.coef[j] > 0) ++pos;
        else if (r.coef[j] < 0) ++non;
      }
      if (pos + non == 0) continue;
      std::size_t cost = pos * non;
      if (var < 0 || cost < best_cost) {
        var = j;
        best_cost = cost;
      }
    }
    if (var < 0) break;

    detail::Elimination el;
    el.var = var;
    std::vector<FmRow> rest;
    for (auto& r : rows) {
      if (r.coef[var] > 0) el.lowers.push_back(std::move(r));
      else if (r.coef[var] < 0) el.uppers.push_back(std::move(r));
      else rest.push_back(std::move(r));
    }
    for (const auto& lo : el.lowers) {
      for (const auto& up : el.uppers) {
        FmRow comb;
        Rat a = -up.coef[var];  // > 0
        Rat b = lo.coef[var];   // > 0
        comb.c0 = lo.c0 * a + up.c0 * b;
        comb.coef.resize(n);
        for (int k = 0; k < n; ++k)
          comb.coef[k] = lo.coef[k] * a + up.coef[k] * b;
        comb.coef[var] = 0;
        comb.strict = lo.strict || up.strict;
        rest.push_back(std::move(comb));
      }
    }
    if (!detail::normalize_rows(rest)) return std::nullopt;
    rows = std::move(rest);
    active[var] = false;
    elims.push_back(std::move(el));
  }
  for (const auto& r : rows)
    if (detail::first_nonzero(r.coef) < 0 && !detail::constant_row_ok(r))
      return std::nullopt;

  // Back-substitution: assign eliminated variables in reverse order, always
  // inside the bound interval induced by the already-assigned ones.
  std::vector<Rat> x(n, Rat(0));
  for (auto it = elims.rbegin(); it != elims.rend(); ++it) {
    bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
    Rat lo, hi;
    auto bound = [&](const FmRow& r) {
      Rat v = r.c0;
      for (int k = 0; k < n; ++k)
        if (k != it->var) v += r.coef[k] * x[k];
      return Rat(-v / r.coef[it->var]);
    };
    for (const auto& r : it->lowers) {
      Rat b = bound(r);
      if (!has_lo || b > lo || (b == lo && r.strict)) {
        if (!has_lo || b > lo) lo_strict = r.strict;
        else lo_strict = lo_strict || r.strict;
        lo = b;
        has_lo = true;
      }
    }
    for (const auto& r : it->uppers) {
      Rat b = bound(r);
      if (!has_hi || b < hi || (b == hi && r.strict)) {
        if (!has_hi || b < hi) hi_strict = r.strict;
        else hi_strict = hi_strict || r.strict;
        hi = b;
        has_hi = true;
      }
    }
    Rat v;
    if (has_lo && has_hi) {
      if (lo < hi) v = (lo + hi) / 2;
      else if (lo == hi && !lo_strict && !hi_strict) v = lo;
      else throw std::logic_error("feasibility back-substitution broke");
    } else if (has_lo) {
      v = lo_strict ? Rat(lo + 1) : lo;
    } else if (has_hi) {
      v = hi_strict ? Rat(hi - 1) : hi;
    } else {
      v = 0;
    }
    x[it->var] = v;
  }
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    Rat v = it->c0;
    for (int k = 0; k < n; ++k) v += it->coef[k] * x[k];
    x[it->var] = v;
  }

  if (!sys.satisfies(x))
    throw std::logic_error("feasibility witness fails its own system");
  return x;
}

inline bool feasible(const LinSystem& sys) { return solve_feasible(sys).has_value(); }

}  // namespace tropica
