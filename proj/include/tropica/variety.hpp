#pragma once

// Loci of congruence presentations inside R^n. Membership and grid sampling
// are exact at rational points; for n <= 3 the locus is also produced as a
// finite union of closed polyhedral cells (an H-representation cover, not a
// partition), each certified nonempty by the exact feasibility solver.

#include <optional>
#include <utility>
#include <vector>

#include "tropica/congruence.hpp"
#include "tropica/linear.hpp"

namespace tropica {

// Affine row [c0, c1, ..., cn] standing for c0 + c1 x1 + ... + cn xn.
using AffineRow = std::vector<Rat>;

struct HCell {
  int n_vars = 1;
  std::vector<AffineRow> eq;  // rows == 0
  std::vector<AffineRow> ge;  // rows >= 0
};

struct PolyComplex {
  int n_vars = 1;
  std::vector<HCell> cells;
};

inline LinSystem cell_system(const HCell& c) {
  LinSystem sys(c.n_vars);
  auto split = [&](const AffineRow& row, Rel rel) {
    if (static_cast<int>(row.size()) != c.n_vars + 1)
      throw Error("affine row has wrong length");
    sys.add(row[0], std::vector<Rat>(row.begin() + 1, row.end()), rel);
  };
  for (const auto& r : c.eq) split(r, Rel::Eq);
  for (const auto& r : c.ge) split(r, Rel::Ge);
  return sys;
}

inline std::optional<std::vector<Rat>> cell_point(const HCell& c) {
  return solve_feasible(cell_system(c));
}

inline bool cell_contains(const HCell& c, const std::vector<Rat>& x) {
  return cell_system(c).satisfies(x);
}

inline bool complex_contains(const PolyComplex& pc, const std::vector<Rat>& x) {
  for (const auto& c : pc.cells)
    if (cell_contains(c, x)) return true;
  return false;
}

inline bool member(const CongruencePresentation& E, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != E.n_vars)
    throw Error("evaluation point has wrong dimension");
  for (const auto& [l, r] : E.gens)
    if (r_eval(l, x) != r_eval(r, x)) return false;
  return true;
}

// All grid points of the box that lie in the locus, in lexicographic order.
// The box is one closed rational interval per coordinate; the step must tile
// each interval exactly.
inline std::vector<std::vector<Rat>> sample(
    const CongruencePresentation& E,
    const std::vector<std::pair<Rat, Rat>>& box, const Rat& step) {
  if (static_cast<int>(box.size()) != E.n_vars)
    throw Error("box dimension mismatch");
  if (step <= 0) throw Error("step must be positive");
  long long total = 1;
  std::vector<long long> counts;
  for (const auto& [lo, hi] : box) {
    if (hi < lo) throw Error("box interval is empty");
    Rat span = (hi - lo) / step;
    if (!rat_is_integer(span)) throw Error("step does not tile the box");
    long long k = static_cast<long long>(rat_floor(span)) + 1;
    counts.push_back(k);
    if (k > 10000000 || total > 10000000 / k) throw BoxTooLarge();
    total *= k;
  }

  std::vector<std::vector<Rat>> out;
  std::vector<long long> idx(E.n_vars, 0);
  while (true) {
    std::vector<Rat> x(E.n_vars);
    for (int i = 0; i < E.n_vars; ++i)
      x[i] = box[i].first + Rat(idx[i]) * step;
    if (member(E, x)) out.push_back(std::move(x));
    int j = E.n_vars - 1;
    while (j >= 0 && idx[j] + 1 == counts[j]) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  return out;
}

namespace detail {

// Rows of the dominance system "term (e,c) attains the maximum of p".
inline void add_term_max_rows(HCell& cell, const TropPoly& p, const Exps& e,
                              const Rat& c) {
  for (const auto& [e2, c2] : p.terms) {
    if (e2 == e) continue;
    AffineRow row(p.n_vars + 1);
    row[0] = c - c2;
    for (int i = 0; i < p.n_vars; ++i) row[i + 1] = Rat(e[i] - e2[i]);
    cell.ge.push_back(std::move(row));
  }
}

}  // namespace detail

// Closed-cell cover of { x : f(x) = g(x) }. Cross-multiplied to polynomials
// F and G, the locus is the union over term pairs (i, j) of
// { F_i attains max of F, G_j attains max of G, F_i = G_j }.
inline PolyComplex pair_locus_cells(const RatFn& f, const RatFn& g) {
  if (f.n_vars != g.n_vars) throw Error("mixed variable counts");
  int n = f.n_vars;
  if (n > 3) throw DimensionTooLarge();
  PolyComplex out{n, {}};

  TropPoly F = p_mul(f.num, g.den);
  TropPoly G = p_mul(g.num, f.den);
  if (F.is_bottom() && G.is_bottom()) {
    out.cells.push_back(HCell{n, {}, {}});  // both bottom: all of R^n
    return out;
  }
  if (F.is_bottom() || G.is_bottom()) return out;  // never equal

  for (const auto& [ef, cf] : F.terms) {
    for (const auto& [eg, cg] : G.terms) {
      HCell cell{n, {}, {}};
      AffineRow eq(n + 1);
      eq[0] = cf - cg;
      for (int i = 0; i < n; ++i) eq[i + 1] = Rat(ef[i] - eg[i]);
      cell.eq.push_back(std::move(eq));
      detail::add_term_max_rows(cell, F, ef, cf);
      detail::add_term_max_rows(cell, G, eg, cg);
      if (cell_point(cell)) out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

// Cell cover of the whole locus: intersect the per-generator covers,
// pruning infeasible intersections as they appear.
inline PolyComplex variety_cells(const CongruencePresentation& E) {
  int n = E.n_vars;
  if (n > 3) throw DimensionTooLarge();
  PolyComplex acc{n, {HCell{n, {}, {}}}};
  for (const auto& [l, r] : E.gens) {
    PolyComplex gen_cells = pair_locus_cells(l, r);
    PolyComplex next{n, {}};
    for (const auto& a : acc.cells) {
      for (const auto& b : gen_cells.cells) {
        HCell merged{n, a.eq, a.ge};
        merged.eq.insert(merged.eq.end(), b.eq.begin(), b.eq.end());
        merged.ge.insert(merged.ge.end(), b.ge.begin(), b.ge.end());
        if (cell_point(merged)) next.cells.push_back(std::move(merged));
      }
    }
    acc = std::move(next);
    if (acc.cells.empty()) break;
  }
  return acc;
}

inline bool is_empty(const CongruencePresentation& E) {
  return variety_cells(E).cells.empty();
}

// Sampled necessary condition for (f, g) to act identically on a point set.
inline bool agree_on_points(const std::vector<std::vector<Rat>>& points,
                            const RatFn& f, const RatFn& g) {
  for (const auto& x : points)
    if (r_eval(f, x) != r_eval(g, x)) return false;
  return true;
}

}  // namespace tropica
