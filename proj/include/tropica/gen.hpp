#pragma once

// Seeded random corpora: polynomials, fractions, curves, subgraphs and
// piecewise-linear functions. Everything is driven by one Rng so runs are
// reproducible from a single seed; generators only use int_in so the draw
// sequence is identical across standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "tropica/curve.hpp"
#include "tropica/embed.hpp"
#include "tropica/poly.hpp"
#include "tropica/ratfn.hpp"
#include "tropica/rational.hpp"

namespace tropica::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  long long int_in(long long lo, long long hi) {
    return lo + static_cast<long long>(eng_() %
                                       static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(long long num, long long den) { return int_in(1, den) <= num; }
  Rat rat(long long lo = -8, long long hi = 8) {
    return Rat(int_in(lo, hi), int_in(1, 4));
  }
  Rat positive_rat(long long hi = 8) { return Rat(int_in(1, hi), int_in(1, 3)); }

 private:
  std::mt19937_64 eng_;
};

inline TropPoly random_poly(Rng& rng, int n, int max_terms = 8,
                            int max_exp = 4) {
  int k = static_cast<int>(rng.int_in(1, max_terms));
  std::vector<std::pair<Exps, Rat>> terms;
  for (int t = 0; t < k; ++t) {
    Exps e(n);
    for (int i = 0; i < n; ++i) e[i] = rng.int_in(0, max_exp);
    terms.push_back({std::move(e), Rat(rng.int_in(-10, 10), 2)});
  }
  return make_poly(n, terms);
}

inline RatFn random_ratfn(Rng& rng, int n, int max_terms = 4,
                          int max_exp = 3) {
  TropPoly num = random_poly(rng, n, max_terms, max_exp);
  TropPoly den = rng.chance(1, 3) ? random_poly(rng, n, 2, 1)
                                  : p_const(n, Rat(0));
  return r_make(num, den);
}

// A connected curve with at most max_edges edges: a small finite tree plus
// optional loops, parallel edges and infinite rays.
inline MetricGraph random_curve(Rng& rng, int max_edges = 8,
                                bool allow_infinite = true) {
  int n_core = static_cast<int>(rng.int_in(1, 4));
  std::vector<bool> at_inf(n_core, false);
  std::vector<GraphEdge> edges;
  for (int v = 1; v < n_core; ++v)
    edges.push_back({static_cast<int>(rng.int_in(0, v - 1)), v,
                     Length::fin(rng.positive_rat())});
  int budget = max_edges - static_cast<int>(edges.size());
  while (budget > 0 && rng.chance(1, 2)) {
    --budget;
    int kind = static_cast<int>(rng.int_in(0, allow_infinite ? 2 : 1));
    int a = static_cast<int>(rng.int_in(0, n_core - 1));
    if (kind == 2) {
      at_inf.push_back(true);
      edges.push_back({a, static_cast<int>(at_inf.size()) - 1, Length::inf()});
    } else if (kind == 1) {
      edges.push_back({a, a, Length::fin(rng.positive_rat())});  // loop
    } else {
      int b = static_cast<int>(rng.int_in(0, n_core - 1));
      edges.push_back({a, b == a ? a : b, Length::fin(rng.positive_rat())});
    }
  }
  if (edges.empty())
    edges.push_back({0, 0, Length::fin(rng.positive_rat())});
  return make_graph(std::move(at_inf), std::move(edges));
}

// A point with finite offset; interior, vertex and far-tail positions all
// occur.
inline CurvePoint random_point(Rng& rng, const MetricGraph& g) {
  int e = static_cast<int>(rng.int_in(0, g.n_edges() - 1));
  const GraphEdge& ge = g.edges[e];
  Rat hi = ge.len.infinite ? Rat(6) : ge.len.value;
  Rat t = hi * rng.int_in(0, 12) / 12;
  return cp(e, t);
}

// A nonempty union of closed intervals, possibly whole edges, single points
// and infinite tails.
inline Subgraph random_subgraph(Rng& rng, const MetricGraph& g) {
  Subgraph s;
  int k = static_cast<int>(rng.int_in(1, 3));
  for (int i = 0; i < k; ++i) {
    int e = static_cast<int>(rng.int_in(0, g.n_edges() - 1));
    const GraphEdge& ge = g.edges[e];
    if (ge.len.infinite && rng.chance(1, 3)) {
      s.push_back({e, Rat(rng.int_in(0, 4)), Rat(0), true});
      continue;
    }
    Rat hi = ge.len.infinite ? Rat(5) : ge.len.value;
    Rat a = hi * rng.int_in(0, 10) / 10;
    Rat b = hi * rng.int_in(0, 10) / 10;
    if (b < a) std::swap(a, b);
    s.push_back({e, a, b, false});
  }
  return s;
}

// A random PL function with integer slopes, built from a spanning-tree
// potential on the finite vertices so continuity holds by construction.
// Non-tree edges interpolate their endpoint values with at most two integer
// slopes; loops get an optional tent.
inline PLFunction random_pl(Rng& rng, const MetricGraph& g) {
  int nv = g.n_vertices();
  std::vector<Rat> val(nv, Rat(0));
  std::vector<bool> have(nv, false);
  std::vector<bool> tree_edge(g.n_edges(), false);
  // BFS over finite edges from the first finite vertex.
  int root = 0;
  while (g.at_infinity[root]) ++root;
  val[root] = rng.rat(-3, 3);
  have[root] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e = 0; e < g.n_edges(); ++e) {
      const GraphEdge& ge = g.edges[e];
      if (ge.len.infinite) continue;
      for (auto [a, b] : {std::pair{ge.u, ge.v}, std::pair{ge.v, ge.u}}) {
        if (have[a] && !have[b]) {
          val[b] = val[a] + Rat(rng.int_in(-2, 2)) * ge.len.value;
          have[b] = true;
          tree_edge[e] = true;
          grew = true;
        }
      }
    }
  }

  PLFunction f;
  f.edges.resize(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    const GraphEdge& ge = g.edges[e];
    PLEdge& pe = f.edges[e];
    if (ge.len.infinite) {
      pe.pts.push_back({Rat(0), val[ge.u]});
      pe.tail_slope = rng.int_in(-2, 2);
      continue;
    }
    const Rat& L = ge.len.value;
    Rat D = val[ge.v] - val[ge.u];
    Rat s = D / L;
    pe.pts.push_back({Rat(0), val[ge.u]});
    if (ge.u == ge.v && rng.chance(1, 2)) {
      // Tent on a loop: up with slope s then back down.
      long long k = rng.int_in(1, 2);
      pe.pts.push_back({L / 2, val[ge.u] + Rat(k) * L / 2});
    } else if (!rat_is_integer(s)) {
      Rat a = rat_floor(s);
      Rat b = a + 1;
      Rat t = b * L - D;
      pe.pts.push_back({t, val[ge.u] + a * t});
    }
    pe.pts.push_back({L, val[ge.v]});
  }
  validate_pl(f, g);
  return pl_simplify(std::move(f), g);
}

inline GeneratorTuple random_tuple(Rng& rng, const MetricGraph& g, int dim) {
  std::vector<PLFunction> fns;
  for (int i = 0; i < dim; ++i) fns.push_back(random_pl(rng, g));
  return make_tuple(g, std::move(fns));
}

}  // namespace tropica::gen
