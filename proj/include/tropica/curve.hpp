#pragma once

// Metric graphs with possibly-infinite leaf edges, points on them, exact
// shortest-path distances, piecewise-linear functions with integer slopes,
// chip-firing, divisors and canonical models.
//
// Conventions. Vertices are indices; each edge stores (u, v, length) and is
// parameterized from u. Infinite edges are normalized so that v is the
// at-infinity endpoint, which must be a valence-1 vertex. A point is an edge
// index with a finite offset from u, or the infinite end marker; vertex
// points have many such spellings and normalize_point picks one canonical
// representative per vertex.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropica/errors.hpp"
#include "tropica/rational.hpp"

namespace tropica {

struct Length {
  bool infinite = false;
  Rat value;  // meaningful only when finite

  static Length inf() { return Length{true, Rat(0)}; }
  static Length fin(Rat v) { return Length{false, std::move(v)}; }

  bool operator==(const Length& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  std::string str() const { return infinite ? "inf" : rat_string(value); }
};

struct GraphEdge {
  int u = 0, v = 0;
  Length len;
};

struct HalfEdge {
  int edge;
  bool from_u;  // leaving the vertex along increasing offset?
};

struct MetricGraph {
  std::vector<bool> at_infinity;  // per vertex
  std::vector<GraphEdge> edges;

  int n_vertices() const { return static_cast<int>(at_infinity.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  std::vector<HalfEdge> incident(int v) const {
    std::vector<HalfEdge> out;
    for (int e = 0; e < n_edges(); ++e) {
      if (edges[e].u == v) out.push_back({e, true});
      if (edges[e].v == v) out.push_back({e, false});
    }
    return out;
  }
};

inline int vertex_valence(const MetricGraph& g, int v) {
  return static_cast<int>(g.incident(v).size());
}

// Validates and normalizes (infinite edges get their at-infinity end as v).
inline MetricGraph make_graph(std::vector<bool> at_infinity,
                              std::vector<GraphEdge> edges) {
  MetricGraph g{std::move(at_infinity), std::move(edges)};
  int nv = g.n_vertices();
  if (nv == 0 || g.edges.empty())
    throw Error("a curve needs at least one vertex and one edge");
  for (auto& e : g.edges) {
    if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv)
      throw Error("edge endpoint out of range");
    if (e.len.infinite) {
      if (g.at_infinity[e.u] && !g.at_infinity[e.v]) std::swap(e.u, e.v);
      if (g.at_infinity[e.u] || !g.at_infinity[e.v])
        throw Error("an infinite edge needs exactly one at-infinity end");
    } else {
      if (e.len.value <= 0) throw Error("edge lengths must be positive");
      if (g.at_infinity[e.u] || g.at_infinity[e.v])
        throw Error("finite edges cannot touch infinity");
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (!g.at_infinity[v]) continue;
    auto inc = g.incident(v);
    if (inc.size() != 1 || !g.edges[inc[0].edge].len.infinite)
      throw Error("at-infinity vertices carry exactly one infinite edge");
  }
  // Connectivity over all edges.
  std::vector<bool> seen(nv, false);
  std::vector<int> todo = {g.edges[0].u};
  seen[g.edges[0].u] = true;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (const auto& e : g.edges) {
      for (int w : {e.u == v ? e.v : -1, e.v == v ? e.u : -1}) {
        if (w >= 0 && !seen[w]) {
          seen[w] = true;
          todo.push_back(w);
        }
      }
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!seen[v]) throw Error("curve must be connected");
  return g;
}

// ---------------------------------------------------------------------------
// Points

struct CurvePoint {
  int edge = 0;
  Rat offset;           // from u; ignored when inf_end
  bool inf_end = false; // the at-infinity end of an infinite edge

  bool operator==(const CurvePoint& o) const {
    return edge == o.edge && inf_end == o.inf_end &&
           (inf_end || offset == o.offset);
  }
  bool operator<(const CurvePoint& o) const {
    if (edge != o.edge) return edge < o.edge;
    if (inf_end != o.inf_end) return !inf_end;
    return !inf_end && offset < o.offset;
  }
};

inline CurvePoint cp(int edge, Rat offset) {
  return CurvePoint{edge, std::move(offset), false};
}
inline CurvePoint cp_inf(int edge) { return CurvePoint{edge, Rat(0), true}; }

// The vertex a point sits on, if it is an edge end.
inline std::optional<int> point_vertex(const MetricGraph& g,
                                       const CurvePoint& p) {
  const GraphEdge& e = g.edges[p.edge];
  if (p.inf_end) return e.v;
  if (p.offset == 0) return e.u;
  if (!e.len.infinite && p.offset == e.len.value) return e.v;
  return std::nullopt;
}

inline void check_point(const MetricGraph& g, const CurvePoint& p) {
  if (p.edge < 0 || p.edge >= g.n_edges()) throw Error("edge index out of range");
  const GraphEdge& e = g.edges[p.edge];
  if (p.inf_end) {
    if (!e.len.infinite) throw Error("finite edges have no infinite end");
    return;
  }
  if (p.offset < 0 || (!e.len.infinite && p.offset > e.len.value))
    throw Error("offset outside the edge");
}

// Canonical point sitting on a vertex: smallest incident edge, u-end
// preferred on ties.
inline CurvePoint vertex_point(const MetricGraph& g, int v) {
  auto inc = g.incident(v);
  if (inc.empty()) throw Error("isolated vertex");
  const HalfEdge& h = inc.front();  // incident() scans edges in order
  if (g.at_infinity[v]) return cp_inf(h.edge);
  if (h.from_u) return cp(h.edge, Rat(0));
  return cp(h.edge, g.edges[h.edge].len.value);
}

// Canonical representative: vertex points go through vertex_point; interior
// points are already canonical.
inline CurvePoint normalize_point(const MetricGraph& g, CurvePoint p) {
  check_point(g, p);
  auto v = point_vertex(g, p);
  if (!v) return p;
  return vertex_point(g, *v);
}

inline bool same_point(const MetricGraph& g, const CurvePoint& a,
                       const CurvePoint& b) {
  return normalize_point(g, a) == normalize_point(g, b);
}

inline std::string point_text(const MetricGraph& g, const CurvePoint& p) {
  CurvePoint n = normalize_point(g, p);
  if (auto v = point_vertex(g, n)) return "v" + std::to_string(*v);
  return "e" + std::to_string(n.edge) + ":" + rat_string(n.offset);
}

inline int valence(const MetricGraph& g, const CurvePoint& p) {
  auto v = point_vertex(g, p);
  if (!v) return 2;
  if (g.at_infinity[*v]) return 1;
  return vertex_valence(g, *v);
}

// ---------------------------------------------------------------------------
// Distances

namespace detail {

// Single-source exact Dijkstra over finite vertices and finite edges,
// seeded with initial offers. Unreachable stays disengaged (= infinite).
inline std::vector<std::optional<Rat>> dijkstra(
    const MetricGraph& g, std::vector<std::optional<Rat>> dist) {
  int nv = g.n_vertices();
  std::vector<bool> done(nv, false);
  while (true) {
    int best = -1;
    for (int v = 0; v < nv; ++v)
      if (!done[v] && dist[v] &&
          (best < 0 || *dist[v] < *dist[best]))
        best = v;
    if (best < 0) break;
    done[best] = true;
    for (const auto& e : g.edges) {
      if (e.len.infinite) continue;
      for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        if (a != best) continue;
        Rat cand = *dist[best] + e.len.value;
        if (!dist[b] || cand < *dist[b]) dist[b] = cand;
      }
    }
  }
  return dist;
}

}  // namespace detail

// Exact distance between two points; disengaged optional means infinite.
inline std::optional<Rat> point_dist(const MetricGraph& g, const CurvePoint& x,
                                     const CurvePoint& y) {
  check_point(g, x);
  check_point(g, y);
  if (same_point(g, x, y)) return Rat(0);
  if (x.inf_end || y.inf_end) return std::nullopt;

  // Exit costs from each point to its edge endpoints.
  auto offers = [&](const CurvePoint& p) {
    std::vector<std::pair<int, Rat>> out;
    const GraphEdge& e = g.edges[p.edge];
    out.push_back({e.u, p.offset});
    if (!e.len.infinite) out.push_back({e.v, e.len.value - p.offset});
    return out;
  };

  std::vector<std::optional<Rat>> seed(g.n_vertices());
  for (auto& [v, c] : offers(x))
    if (!seed[v] || c < *seed[v]) seed[v] = c;
  auto dist = detail::dijkstra(g, std::move(seed));

  std::optional<Rat> best;
  if (x.edge == y.edge) best = abs(x.offset - y.offset);
  for (auto& [v, c] : offers(y)) {
    if (!dist[v]) continue;
    Rat cand = *dist[v] + c;
    if (!best || cand < *best) best = cand;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Subgraphs: unions of closed edge intervals

struct EdgeInterval {
  int edge = 0;
  Rat lo, hi;          // hi ignored when to_inf
  bool to_inf = false; // [lo, infinity) on an infinite edge
};

using Subgraph = std::vector<EdgeInterval>;

namespace detail {

// Per-edge sorted, merged interval lists.
inline std::vector<std::vector<EdgeInterval>> normalized_subgraph(
    const MetricGraph& g, const Subgraph& s) {
  if (s.empty()) throw InvalidSubgraph("empty subgraph");
  std::vector<std::vector<EdgeInterval>> per_edge(g.n_edges());
  for (EdgeInterval iv : s) {
    if (iv.edge < 0 || iv.edge >= g.n_edges())
      throw InvalidSubgraph("edge index out of range");
    const GraphEdge& e = g.edges[iv.edge];
    if (iv.to_inf && !e.len.infinite)
      throw InvalidSubgraph("finite edge has no infinite tail");
    if (iv.lo < 0) throw InvalidSubgraph("interval start below 0");
    if (!iv.to_inf) {
      if (iv.hi < iv.lo) throw InvalidSubgraph("interval ends before it starts");
      if (!e.len.infinite && iv.hi > e.len.value)
        throw InvalidSubgraph("interval exceeds the edge");
    }
    per_edge[iv.edge].push_back(iv);
  }
  for (auto& list : per_edge) {
    std::sort(list.begin(), list.end(),
              [](const EdgeInterval& a, const EdgeInterval& b) {
                return a.lo < b.lo;
              });
    std::vector<EdgeInterval> merged;
    for (const auto& iv : list) {
      if (!merged.empty()) {
        EdgeInterval& last = merged.back();
        if (last.to_inf || iv.lo <= last.hi) {
          if (!last.to_inf) {
            last.to_inf = iv.to_inf;
            if (!iv.to_inf) last.hi = std::max(last.hi, iv.hi);
          }
          continue;
        }
      }
      merged.push_back(iv);
    }
    list = std::move(merged);
  }
  return per_edge;
}

// Distance from S to every finite vertex.
inline std::vector<std::optional<Rat>> subgraph_vertex_dist(
    const MetricGraph& g,
    const std::vector<std::vector<EdgeInterval>>& per_edge) {
  std::vector<std::optional<Rat>> seed(g.n_vertices());
  auto offer = [&](int v, const Rat& c) {
    if (!seed[v] || c < *seed[v]) seed[v] = c;
  };
  for (int e = 0; e < g.n_edges(); ++e) {
    if (per_edge[e].empty()) continue;
    const GraphEdge& ge = g.edges[e];
    offer(ge.u, per_edge[e].front().lo);
    if (!ge.len.infinite) {
      const EdgeInterval& last = per_edge[e].back();
      offer(ge.v, ge.len.value - last.hi);
    }
  }
  return detail::dijkstra(g, std::move(seed));
}

// Distance from S to the point at offset t of edge e, given vertex
// distances. Routes: stay on the edge (local interval endpoints) or exit
// through an endpoint.
inline std::optional<Rat> subgraph_point_dist(
    const MetricGraph& g,
    const std::vector<std::vector<EdgeInterval>>& per_edge,
    const std::vector<std::optional<Rat>>& vdist, int e, const Rat& t) {
  const GraphEdge& ge = g.edges[e];
  std::optional<Rat> best;
  auto offer = [&](const Rat& c) {
    if (!best || c < *best) best = c;
  };
  for (const auto& iv : per_edge[e]) {
    if (t >= iv.lo && (iv.to_inf || t <= iv.hi)) return Rat(0);
    if (t < iv.lo) offer(iv.lo - t);
    else if (!iv.to_inf) offer(t - iv.hi);
  }
  if (vdist[ge.u]) offer(*vdist[ge.u] + t);
  if (!ge.len.infinite && vdist[ge.v]) offer(*vdist[ge.v] + ge.len.value - t);
  return best;
}

}  // namespace detail

inline std::optional<Rat> dist_to_subgraph(const MetricGraph& g,
                                           const Subgraph& s,
                                           const CurvePoint& x) {
  check_point(g, x);
  auto per_edge = detail::normalized_subgraph(g, s);
  auto vdist = detail::subgraph_vertex_dist(g, per_edge);
  if (x.inf_end) {
    // The infinite end is inside S only if a tail interval runs out to it.
    for (const auto& iv : per_edge[x.edge])
      if (iv.to_inf) return Rat(0);
    return std::nullopt;
  }
  return detail::subgraph_point_dist(g, per_edge, vdist, x.edge, x.offset);
}

// ---------------------------------------------------------------------------
// Piecewise-linear functions

struct PLPoint {
  Rat offset;
  Rat value;
};

struct PLEdge {
  std::vector<PLPoint> pts;  // sorted; starts at 0; finite edges end at len
  long long tail_slope = 0;  // infinite edges: slope past the last breakpoint
};

struct PLFunction {
  bool bottom = false;
  std::vector<PLEdge> edges;  // parallel to the graph's edge list
};

// Value in Q extended by both infinities (attained only at infinity).
struct ExtValue {
  int sign = 0;  // -1: -inf, 0: finite, +1: +inf
  Rat v;

  static ExtValue neg_inf() { return {-1, Rat(0)}; }
  static ExtValue pos_inf() { return {+1, Rat(0)}; }
  static ExtValue fin(Rat x) { return {0, std::move(x)}; }

  bool operator==(const ExtValue& o) const {
    return sign == o.sign && (sign != 0 || v == o.v);
  }
  bool operator!=(const ExtValue& o) const { return !(*this == o); }
  std::string str() const {
    if (sign < 0) return "-inf";
    if (sign > 0) return "+inf";
    return rat_string(v);
  }
};

inline PLFunction pl_bottom() { return PLFunction{true, {}}; }

inline PLFunction pl_const(const MetricGraph& g, const Rat& c) {
  PLFunction f;
  f.edges.resize(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    const GraphEdge& ge = g.edges[e];
    f.edges[e].pts.push_back({Rat(0), c});
    if (!ge.len.infinite) f.edges[e].pts.push_back({ge.len.value, c});
  }
  return f;
}

namespace detail {

inline Rat pl_value_at(const PLEdge& pe, const Rat& t) {
  const auto& pts = pe.pts;
  if (t >= pts.back().offset)
    return pts.back().value + Rat(pe.tail_slope) * (t - pts.back().offset);
  std::size_t i = 0;
  while (i + 1 < pts.size() && pts[i + 1].offset < t) ++i;
  // pts[i].offset <= t <= pts[i+1].offset (t below back it can't pass end)
  if (pts[i].offset == t) return pts[i].value;
  const PLPoint& a = pts[i];
  const PLPoint& b = pts[i + 1];
  return a.value + (b.value - a.value) * (t - a.offset) / (b.offset - a.offset);
}

}  // namespace detail

inline ExtValue pl_eval(const PLFunction& f, const MetricGraph& g,
                        const CurvePoint& x) {
  check_point(g, x);
  if (f.bottom) return ExtValue::neg_inf();
  const PLEdge& pe = f.edges[x.edge];
  if (x.inf_end) {
    if (pe.tail_slope > 0) return ExtValue::pos_inf();
    if (pe.tail_slope < 0) return ExtValue::neg_inf();
    return ExtValue::fin(pe.pts.back().value);
  }
  return ExtValue::fin(detail::pl_value_at(pe, x.offset));
}

// Structural checks: breakpoint ordering, integer slopes, continuity at
// shared vertices. Throws on violation.
inline void validate_pl(const PLFunction& f, const MetricGraph& g) {
  if (f.bottom) {
    if (!f.edges.empty()) throw Error("bottom carries no data");
    return;
  }
  if (static_cast<int>(f.edges.size()) != g.n_edges())
    throw Error("function does not match the curve");
  for (int e = 0; e < g.n_edges(); ++e) {
    const GraphEdge& ge = g.edges[e];
    const auto& pts = f.edges[e].pts;
    if (pts.empty() || pts.front().offset != 0)
      throw Error("every edge needs a breakpoint at offset 0");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i].offset >= pts[i + 1].offset)
        throw Error("breakpoints must be strictly increasing");
      Rat slope = (pts[i + 1].value - pts[i].value) /
                  (pts[i + 1].offset - pts[i].offset);
      if (!rat_is_integer(slope)) throw Error("slopes must be integers");
    }
    if (!ge.len.infinite) {
      if (pts.back().offset != ge.len.value)
        throw Error("finite edges need a breakpoint at the far end");
      if (f.edges[e].tail_slope != 0)
        throw Error("finite edges have no tail");
    }
  }
  // Continuity at shared finite vertices (covers loops too).
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (g.at_infinity[v]) continue;
    std::optional<Rat> val;
    for (const auto& h : g.incident(v)) {
      const auto& pts = f.edges[h.edge].pts;
      Rat here = h.from_u ? pts.front().value : pts.back().value;
      if (!val) val = here;
      else if (*val != here) throw Error("discontinuous at a vertex");
    }
  }
}

// Drops breakpoints that lie on the segment between their neighbors.
inline PLFunction pl_simplify(PLFunction f, const MetricGraph& g) {
  if (f.bottom) return f;
  for (int e = 0; e < g.n_edges(); ++e) {
    auto& pts = f.edges[e].pts;
    std::vector<PLPoint> keep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (keep.size() >= 2) {
        const PLPoint& a = keep[keep.size() - 2];
        const PLPoint& b = keep.back();
        const PLPoint& c = pts[i];
        if ((b.value - a.value) * (c.offset - b.offset) ==
            (c.value - b.value) * (b.offset - a.offset))
          keep.pop_back();
        else
          break;
      }
      keep.push_back(pts[i]);
    }
    // On an infinite edge the final interior breakpoint is redundant when
    // the last segment already has the tail slope.
    if (g.edges[e].len.infinite) {
      while (keep.size() >= 2) {
        const PLPoint& a = keep[keep.size() - 2];
        const PLPoint& b = keep.back();
        if (b.value - a.value == Rat(f.edges[e].tail_slope) * (b.offset - a.offset))
          keep.pop_back();
        else
          break;
      }
    }
    pts = std::move(keep);
  }
  return f;
}

inline bool pl_equal(const PLFunction& a, const PLFunction& b,
                     const MetricGraph& g) {
  if (a.bottom || b.bottom) return a.bottom == b.bottom;
  PLFunction x = pl_simplify(a, g), y = pl_simplify(b, g);
  for (int e = 0; e < g.n_edges(); ++e) {
    if (x.edges[e].tail_slope != y.edges[e].tail_slope) return false;
    const auto& p = x.edges[e].pts;
    const auto& q = y.edges[e].pts;
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i].offset != q[i].offset || p[i].value != q[i].value) return false;
  }
  return true;
}

namespace detail {

// Merged breakpoint offsets of two edge functions.
inline std::vector<Rat> merged_offsets(const PLEdge& a, const PLEdge& b) {
  std::vector<Rat> out;
  for (const auto& p : a.pts) out.push_back(p.offset);
  for (const auto& p : b.pts) out.push_back(p.offset);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline PLFunction pl_add(const PLFunction& f, const PLFunction& g_,
                         const MetricGraph& g) {
  if (f.bottom || g_.bottom) return pl_bottom();
  PLFunction out;
  out.edges.resize(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    for (const Rat& t : detail::merged_offsets(f.edges[e], g_.edges[e]))
      out.edges[e].pts.push_back(
          {t, detail::pl_value_at(f.edges[e], t) +
                  detail::pl_value_at(g_.edges[e], t)});
    out.edges[e].tail_slope = f.edges[e].tail_slope + g_.edges[e].tail_slope;
  }
  return pl_simplify(std::move(out), g);
}

inline PLFunction pl_neg(const PLFunction& f, const MetricGraph& g) {
  if (f.bottom) throw BottomNegation();
  PLFunction out = f;
  for (auto& pe : out.edges) {
    for (auto& p : pe.pts) p.value = -p.value;
    pe.tail_slope = -pe.tail_slope;
  }
  return out;
}

// k-fold tropical power: classical scaling of values and slopes (k >= 0).
inline PLFunction pl_scale(const PLFunction& f, long long k,
                           const MetricGraph& g) {
  if (k < 0) throw Error("negative scaling");
  if (f.bottom) return k == 0 ? pl_const(g, Rat(0)) : pl_bottom();
  PLFunction out = f;
  for (auto& pe : out.edges) {
    for (auto& p : pe.pts) p.value *= k;
    pe.tail_slope *= k;
  }
  return pl_simplify(std::move(out), g);
}

inline PLFunction pl_max(const PLFunction& f, const PLFunction& g_,
                         const MetricGraph& g) {
  if (f.bottom) return g_;
  if (g_.bottom) return f;
  PLFunction out;
  out.edges.resize(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    const PLEdge& A = f.edges[e];
    const PLEdge& B = g_.edges[e];
    std::vector<Rat> offs = detail::merged_offsets(A, B);
    // Crossings strictly between consecutive merged offsets.
    std::vector<Rat> extra;
    for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
      Rat d0 = detail::pl_value_at(A, offs[i]) - detail::pl_value_at(B, offs[i]);
      Rat d1 = detail::pl_value_at(A, offs[i + 1]) -
               detail::pl_value_at(B, offs[i + 1]);
      if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
        Rat t = offs[i] + (offs[i + 1] - offs[i]) * d0 / (d0 - d1);
        extra.push_back(t);
      }
    }
    // A tail crossing past the last breakpoint on an infinite edge.
    long long tail = 0;
    if (g.edges[e].len.infinite) {
      Rat T = offs.back();  // merged offsets are sorted, crossings interior
      Rat va = detail::pl_value_at(A, T), vb = detail::pl_value_at(B, T);
      long long sa = A.tail_slope, sb = B.tail_slope;
      if (va == vb) {
        tail = std::max(sa, sb);
      } else if (va > vb) {
        tail = sa;
        if (sb > sa) {
          extra.push_back(T + (va - vb) / Rat(sb - sa));
          tail = sb;
        }
      } else {
        tail = sb;
        if (sa > sb) {
          extra.push_back(T + (vb - va) / Rat(sa - sb));
          tail = sa;
        }
      }
    }
    offs.insert(offs.end(), extra.begin(), extra.end());
    std::sort(offs.begin(), offs.end());
    offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
    for (const Rat& t : offs)
      out.edges[e].pts.push_back(
          {t, std::max(detail::pl_value_at(A, t), detail::pl_value_at(B, t))});
    out.edges[e].tail_slope = tail;
  }
  return pl_simplify(std::move(out), g);
}

// Sampling window for infinite edges: beyond it the function is determined
// by its tail slope.
inline Rat truncation_horizon(const PLFunction& f) {
  Rat m(0);
  if (!f.bottom)
    for (const auto& pe : f.edges)
      for (const auto& p : pe.pts) m = std::max(m, p.offset);
  return 2 * m + 1;
}

// ---------------------------------------------------------------------------
// Chip firing

// The function x -> -min(dist(S, x), l); pass disengaged l for the
// unclipped -dist(S, x).
inline PLFunction chip_fire(const MetricGraph& g, const Subgraph& s,
                            const std::optional<Rat>& l) {
  if (l && *l <= 0) throw Error("the level must be positive");
  auto per_edge = detail::normalized_subgraph(g, s);
  auto vdist = detail::subgraph_vertex_dist(g, per_edge);

  auto clip = [&](const std::optional<Rat>& d) -> Rat {
    // A connected curve with nonempty S keeps finite points at finite
    // distance, so d is engaged here.
    if (!d) throw std::logic_error("infinite distance at a finite point");
    if (l && *l < *d) return -*l;
    return -*d;
  };

  PLFunction out;
  out.edges.resize(g.n_edges());
  for (int e = 0; e < g.n_edges(); ++e) {
    const GraphEdge& ge = g.edges[e];
    auto d_at = [&](const Rat& t) {
      return detail::subgraph_point_dist(g, per_edge, vdist, e, t);
    };

    // Segment boundaries: edge ends and interval endpoints.
    std::vector<Rat> cuts = {Rat(0)};
    for (const auto& iv : per_edge[e]) {
      cuts.push_back(iv.lo);
      if (!iv.to_inf) cuts.push_back(iv.hi);
    }
    if (!ge.len.infinite) {
      cuts.push_back(ge.len.value);
    } else {
      // Extend far enough that the function is linear past the last cut:
      // slope +1 until the level clips it, 0 inside a tail interval.
      Rat far = *std::max_element(cuts.begin(), cuts.end());
      auto d_far = d_at(far);
      if (d_far && l && *d_far < *l) far += *l - *d_far;
      cuts.push_back(far);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Candidate breakpoints per segment; values are recomputed exactly, so
    // harmless extras are dropped by the final simplify.
    std::vector<Rat> offs = {Rat(0)};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Rat& p = cuts[i];
      const Rat& q = cuts[i + 1];
      offs.push_back(p);
      offs.push_back(q);
      Rat dp = *d_at(p), dq = *d_at(q);
      Rat tstar = (p + q + dq - dp) / 2;  // crossing of the two arms
      if (tstar > p && tstar < q) offs.push_back(tstar);
      if (l) {
        // Level crossings of each arm.
        Rat c1 = p + (*l - dp), c2 = q - (*l - dq);
        if (c1 > p && c1 < q) offs.push_back(c1);
        if (c2 > p && c2 < q) offs.push_back(c2);
      }
    }
    std::sort(offs.begin(), offs.end());
    offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
    for (const Rat& t : offs) out.edges[e].pts.push_back({t, clip(d_at(t))});

    if (ge.len.infinite) {
      bool tail_in_s = false;
      for (const auto& iv : per_edge[e])
        if (iv.to_inf) tail_in_s = true;
      out.edges[e].tail_slope = (tail_in_s || l) ? 0 : -1;
    }
  }
  return pl_simplify(std::move(out), g);
}

// ---------------------------------------------------------------------------
// Divisors

using Divisor = std::map<CurvePoint, long long>;

inline long long divisor_degree(const Divisor& d) {
  long long deg = 0;
  for (const auto& [p, o] : d) deg += o;
  return deg;
}

namespace detail {

inline long long slope_after(const PLEdge& pe, std::size_t i) {
  // Slope of the piece starting at breakpoint i (tail slope past the end).
  if (i + 1 >= pe.pts.size()) return pe.tail_slope;
  Rat s = (pe.pts[i + 1].value - pe.pts[i].value) /
          (pe.pts[i + 1].offset - pe.pts[i].offset);
  return static_cast<long long>(rat_floor(s));
}

}  // namespace detail

inline Divisor divisor(const PLFunction& f, const MetricGraph& g) {
  if (f.bottom) throw BottomDivisor();
  validate_pl(f, g);
  PLFunction s = pl_simplify(f, g);
  Divisor out;
  auto bump = [&](const CurvePoint& p, long long o) {
    if (o == 0) return;
    CurvePoint key = normalize_point(g, p);
    out[key] += o;
    if (out[key] == 0) out.erase(key);
  };

  for (int e = 0; e < g.n_edges(); ++e) {
    const PLEdge& pe = s.edges[e];
    const GraphEdge& ge = g.edges[e];
    // Interior breakpoints: outgoing slopes right minus left.
    for (std::size_t i = 0; i < pe.pts.size(); ++i) {
      const Rat& t = pe.pts[i].offset;
      bool interior = t > 0 && (ge.len.infinite || t < ge.len.value);
      if (!interior) continue;
      long long left = detail::slope_after(pe, i - 1);
      long long right = detail::slope_after(pe, i);
      bump(cp(e, t), right - left);
    }
  }
  // Finite vertices: sum of outgoing slopes over incident half-edges.
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (g.at_infinity[v]) continue;
    long long total = 0;
    for (const auto& h : g.incident(v)) {
      const PLEdge& pe = s.edges[h.edge];
      // Finite edges keep both end breakpoints, so size >= 2 at the v end.
      if (h.from_u) total += detail::slope_after(pe, 0);
      else total -= detail::slope_after(pe, pe.pts.size() - 2);
    }
    bump(vertex_point(g, v), total);
  }
  // Points at infinity: minus the slope toward infinity.
  for (int e = 0; e < g.n_edges(); ++e)
    if (g.edges[e].len.infinite) bump(cp_inf(e), -s.edges[e].tail_slope);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical model

struct ModelEdge {
  CurvePoint a, b;
  Length len;  // total length of the chain
};

struct CanonicalModel {
  std::vector<CurvePoint> vertices;  // normalized
  std::vector<ModelEdge> edges;
};

inline CanonicalModel canonical_model(const MetricGraph& g) {
  std::vector<int> model_vs;
  int first_finite = -1;
  bool all_val2_finite = true;
  int infinite_count = 0;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (g.at_infinity[v]) {
      ++infinite_count;
      model_vs.push_back(v);
      continue;
    }
    if (first_finite < 0) first_finite = v;
    if (vertex_valence(g, v) != 2) {
      model_vs.push_back(v);
      all_val2_finite = false;
    }
  }

  CanonicalModel out;
  if (model_vs.empty()) {
    // Circle: every point has valence 2. One distinguished point, one loop.
    Rat total(0);
    for (const auto& e : g.edges) total += e.len.value;
    CurvePoint p = normalize_point(g, cp(0, Rat(0)));
    out.vertices.push_back(p);
    out.edges.push_back({p, p, Length::fin(total)});
    return out;
  }
  if (infinite_count == 2 && all_val2_finite && first_finite >= 0) {
    // Doubly-infinite line: both ends plus one finite point.
    model_vs.push_back(first_finite);
    std::sort(model_vs.begin(), model_vs.end());
  }

  std::vector<bool> is_model(g.n_vertices(), false);
  for (int v : model_vs) is_model[v] = true;
  for (int v : model_vs) out.vertices.push_back(vertex_point(g, v));

  // Walk chains of valence-2 vertices between model vertices. Both
  // directions of a traversed edge are consumed, so each chain is recorded
  // once.
  std::vector<std::array<bool, 2>> used(g.n_edges(), {false, false});
  auto mark = [&](int e, bool from_u) { used[e][from_u ? 0 : 1] = true; };
  auto is_used = [&](int e, bool from_u) { return used[e][from_u ? 0 : 1]; };

  for (int v : model_vs) {
    for (const auto& h0 : g.incident(v)) {
      if (is_used(h0.edge, h0.from_u)) continue;
      bool infinite_chain = false;
      Rat total(0);
      int e = h0.edge;
      bool from_u = h0.from_u;
      while (true) {
        mark(e, from_u);
        mark(e, !from_u);
        const GraphEdge& ge = g.edges[e];
        if (ge.len.infinite) infinite_chain = true;
        else total += ge.len.value;
        int next = from_u ? ge.v : ge.u;
        if (is_model[next]) {
          out.edges.push_back({vertex_point(g, v), vertex_point(g, next),
                               infinite_chain ? Length::inf()
                                              : Length::fin(total)});
          break;
        }
        // Valence-2 continuation: the other half-edge at `next`.
        bool advanced = false;
        for (const auto& h : g.incident(next)) {
          if (h.edge == e && h.from_u == !from_u) continue;  // came in here
          e = h.edge;
          from_u = h.from_u;
          advanced = true;
          break;
        }
        if (!advanced) throw std::logic_error("chain walk got stuck");
      }
    }
  }
  return out;
}

}  // namespace tropica
