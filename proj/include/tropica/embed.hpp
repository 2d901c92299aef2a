#pragma once

// The evaluation map of a tuple of PL functions on a curve: its image as
// exact segments and rays, the primitive-direction (local isometry) check,
// exact injectivity certification, substitution of fractions through the
// tuple, and sampled sup/inf comparisons between a set and its preimage.

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "tropica/curve.hpp"
#include "tropica/errors.hpp"
#include "tropica/ratfn.hpp"

namespace tropica {

struct GeneratorTuple {
  MetricGraph curve;
  std::vector<PLFunction> fns;  // none bottom, all on `curve`

  int dim() const { return static_cast<int>(fns.size()); }
};

inline GeneratorTuple make_tuple(MetricGraph curve,
                                 std::vector<PLFunction> fns) {
  if (fns.empty()) throw Error("a generator tuple needs at least one function");
  for (const auto& f : fns) {
    if (f.bottom) throw Error("generator tuples exclude the bottom function");
    validate_pl(f, curve);
  }
  return GeneratorTuple{std::move(curve), std::move(fns)};
}

inline std::vector<Rat> theta_point(const GeneratorTuple& g,
                                    const CurvePoint& x) {
  if (x.inf_end) throw InfinitePoint();
  std::vector<Rat> out;
  out.reserve(g.fns.size());
  for (const auto& f : g.fns) {
    ExtValue v = pl_eval(f, g.curve, x);
    if (v.sign != 0) throw InfinitePoint();  // unreachable at finite points
    out.push_back(v.v);
  }
  return out;
}

// One straight piece of the image: the source interval [lo, hi] of an edge
// (or the tail [lo, inf) for a ray) together with its image endpoints and
// the integer slope vector per unit of curve length.
struct ImagePiece {
  int edge = 0;
  Rat lo, hi;  // hi == lo for rays and degenerate pieces
  bool ray = false;
  std::vector<Rat> start, end;  // end == start for rays
  std::vector<long long> slope;

  Rat length() const { return hi - lo; }
};

inline std::vector<ImagePiece> image_segments(const GeneratorTuple& g) {
  const MetricGraph& curve = g.curve;
  std::vector<ImagePiece> out;
  for (int e = 0; e < curve.n_edges(); ++e) {
    std::vector<Rat> offs;
    for (const auto& f : g.fns)
      for (const auto& p : f.edges[e].pts) offs.push_back(p.offset);
    std::sort(offs.begin(), offs.end());
    offs.erase(std::unique(offs.begin(), offs.end()), offs.end());

    bool emitted = false;
    for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
      ImagePiece piece;
      piece.edge = e;
      piece.lo = offs[i];
      piece.hi = offs[i + 1];
      piece.start = theta_point(g, cp(e, piece.lo));
      piece.end = theta_point(g, cp(e, piece.hi));
      Rat len = piece.hi - piece.lo;
      for (std::size_t k = 0; k < piece.start.size(); ++k) {
        Rat s = (piece.end[k] - piece.start[k]) / len;
        piece.slope.push_back(static_cast<long long>(rat_floor(s)));
      }
      out.push_back(std::move(piece));
      emitted = true;
    }
    if (curve.edges[e].len.infinite) {
      std::vector<long long> tail;
      bool nonzero = false;
      for (const auto& f : g.fns) {
        tail.push_back(f.edges[e].tail_slope);
        if (f.edges[e].tail_slope != 0) nonzero = true;
      }
      if (nonzero) {
        ImagePiece piece;
        piece.edge = e;
        piece.lo = piece.hi = offs.back();
        piece.ray = true;
        piece.start = piece.end = theta_point(g, cp(e, piece.lo));
        piece.slope = std::move(tail);
        out.push_back(std::move(piece));
        emitted = true;
      }
    }
    if (!emitted) {
      // The whole edge maps to one point.
      ImagePiece piece;
      piece.edge = e;
      piece.lo = piece.hi = offs.front();
      piece.start = piece.end = theta_point(g, cp(e, piece.lo));
      piece.slope.assign(g.fns.size(), 0);
      out.push_back(std::move(piece));
    }
  }
  return out;
}

struct IsometryCheck {
  std::vector<long long> gcds;  // parallel to the segment list; 0 for slope 0
  std::vector<bool> ok;         // nonzero slope with gcd 1
  bool all_ok = true;
};

inline IsometryCheck check_local_isometry(const GeneratorTuple& g) {
  IsometryCheck out;
  for (const ImagePiece& piece : image_segments(g)) {
    long long d = 0;
    for (long long s : piece.slope) d = std::gcd(d, s);
    out.gcds.push_back(d);
    out.ok.push_back(d == 1);
    if (d != 1) out.all_ok = false;
  }
  return out;
}

struct InjectivityCheck {
  bool injective = true;
  // Two distinct curve points with the same image, when not injective.
  std::optional<std::pair<CurvePoint, CurvePoint>> witness;
};

namespace detail {

inline CurvePoint piece_source(const ImagePiece& p, const Rat& s) {
  return cp(p.edge, p.lo + s);
}

// Parameter upper bound: engaged for finite pieces, open for rays.
inline std::optional<Rat> piece_limit(const ImagePiece& p) {
  if (p.ray) return std::nullopt;
  return p.length();
}

inline bool in_range(const Rat& s, const std::optional<Rat>& limit) {
  return s >= 0 && (!limit || s <= *limit);
}

}  // namespace detail

inline InjectivityCheck check_injectivity(const GeneratorTuple& g) {
  const MetricGraph& curve = g.curve;
  std::vector<ImagePiece> pieces = image_segments(g);

  auto collide = [&](const CurvePoint& x, const CurvePoint& y)
      -> std::optional<std::pair<CurvePoint, CurvePoint>> {
    if (same_point(curve, x, y)) return std::nullopt;
    return std::make_pair(normalize_point(curve, x), normalize_point(curve, y));
  };

  InjectivityCheck out;
  auto fail = [&](std::pair<CurvePoint, CurvePoint> w) {
    out.injective = false;
    out.witness = std::move(w);
  };

  // An all-zero tail collapses [T, inf) of its edge to one image point.
  for (int e = 0; e < curve.n_edges(); ++e) {
    if (!curve.edges[e].len.infinite) continue;
    Rat far(0);
    bool zero = true;
    for (const auto& f : g.fns) {
      zero = zero && f.edges[e].tail_slope == 0;
      for (const auto& p : f.edges[e].pts) far = std::max(far, p.offset);
    }
    if (zero) {
      fail({cp(e, far + 1), cp(e, far + 2)});
      return out;
    }
  }

  // A piece with zero slope but extended source collapses an interval.
  for (const ImagePiece& p : pieces) {
    bool zero = true;
    for (long long s : p.slope) zero = zero && s == 0;
    if (!zero || !(p.length() > 0)) continue;
    Rat third = p.length() / 3;
    fail({cp(p.edge, p.lo + third), cp(p.edge, p.lo + 2 * third)});
    return out;
  }

  int n = g.dim();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const ImagePiece& P = pieces[i];
      const ImagePiece& Q = pieces[j];
      auto lim_p = detail::piece_limit(P);
      auto lim_q = detail::piece_limit(Q);
      bool p_zero = true, q_zero = true;
      for (long long s : P.slope) p_zero = p_zero && s == 0;
      for (long long s : Q.slope) q_zero = q_zero && s == 0;

      // Degenerate pieces surviving the scan above are single points.
      if (p_zero && q_zero) {
        if (P.start == Q.start)
          if (auto w = collide(cp(P.edge, P.lo), cp(Q.edge, Q.lo))) {
            fail(*w);
            return out;
          }
        continue;
      }
      if (p_zero || q_zero) {
        // Point against a line: solve start + t*slope = point.
        const ImagePiece& point = p_zero ? P : Q;
        const ImagePiece& line = p_zero ? Q : P;
        auto lim = p_zero ? lim_q : lim_p;
        std::optional<Rat> t;
        bool hits = true;
        for (int k = 0; k < n && hits; ++k) {
          Rat diff = point.start[k] - line.start[k];
          if (line.slope[k] == 0) {
            if (diff != 0) hits = false;
          } else {
            Rat cand = diff / line.slope[k];
            if (!t) t = cand;
            else if (*t != cand) hits = false;
          }
        }
        if (hits && t && detail::in_range(*t, lim)) {
          if (auto w = collide(cp(point.edge, point.lo),
                               detail::piece_source(line, *t))) {
            fail(*w);
            return out;
          }
        }
        continue;
      }

      // Parallel test via all 2x2 minors.
      bool parallel = true;
      int pi = -1, pj = -1;
      for (int a = 0; a < n && parallel; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (P.slope[a] * Q.slope[b] != P.slope[b] * Q.slope[a]) {
            parallel = false;
            pi = a;
            pj = b;
            break;
          }
        }

      if (!parallel) {
        // Unique candidate from two independent coordinates; verify on all.
        long long det = P.slope[pi] * Q.slope[pj] - P.slope[pj] * Q.slope[pi];
        Rat di = Q.start[pi] - P.start[pi];
        Rat dj = Q.start[pj] - P.start[pj];
        Rat s = (di * Q.slope[pj] - dj * Q.slope[pi]) / det;
        Rat t = (di * P.slope[pj] - dj * P.slope[pi]) / det;
        bool hits = detail::in_range(s, lim_p) && detail::in_range(t, lim_q);
        for (int k = 0; k < n && hits; ++k)
          if (P.start[k] + s * P.slope[k] != Q.start[k] + t * Q.slope[k])
            hits = false;
        if (hits) {
          if (auto w = collide(detail::piece_source(P, s),
                               detail::piece_source(Q, t))) {
            fail(*w);
            return out;
          }
        }
        continue;
      }

      // Parallel. Distinct parallel lines never meet; collinear pieces can
      // share a point or a whole stretch.
      int a0 = 0;
      while (P.slope[a0] == 0) ++a0;  // some coordinate moves
      Rat lambda = Rat(Q.slope[a0]) / P.slope[a0];
      bool collinear = true;
      std::optional<Rat> mu;
      for (int k = 0; k < n && collinear; ++k) {
        Rat diff = Q.start[k] - P.start[k];
        if (P.slope[k] == 0) {
          if (diff != 0) collinear = false;
        } else {
          Rat cand = diff / P.slope[k];
          if (!mu) mu = cand;
          else if (*mu != cand) collinear = false;
        }
      }
      if (!collinear) continue;

      // Q's parameter range in P's parameter: s = mu + lambda * t.
      Rat lo = *mu;
      std::optional<Rat> hi;
      if (lim_q) hi = *mu + lambda * *lim_q;
      if (lambda < 0) {
        if (!hi) {
          hi = lo;
          lo = Rat(0);  // unbounded below; clamp to P's range start
          // Q covers s <= *hi; intersect with s >= 0 below.
        } else {
          std::swap(lo, *hi);
        }
      }
      // Intersect [lo, hi] with P's range [0, lim_p].
      Rat s_lo = std::max(lo, Rat(0));
      std::optional<Rat> s_hi = hi;
      if (lim_p && (!s_hi || *s_hi > *lim_p)) s_hi = *lim_p;
      if (s_hi && *s_hi < s_lo) continue;  // no contact

      std::vector<Rat> samples = {s_lo};
      if (s_hi && *s_hi > s_lo) {
        samples.push_back(*s_hi);
        samples.push_back((s_lo + *s_hi) / 2);
      } else if (!s_hi) {
        samples.push_back(s_lo + 1);
        samples.push_back(s_lo + 2);
      }
      for (const Rat& s : samples) {
        Rat t = (s - *mu) / lambda;
        if (!detail::in_range(s, lim_p) || !detail::in_range(t, lim_q))
          continue;
        if (auto w = collide(detail::piece_source(P, s),
                             detail::piece_source(Q, t))) {
          fail(*w);
          return out;
        }
      }
    }
  }
  return out;
}

struct EmbeddingReport {
  std::vector<ImagePiece> segments;
  IsometryCheck isometry;
  InjectivityCheck injectivity;
};

inline EmbeddingReport embedding_report(const GeneratorTuple& g) {
  return EmbeddingReport{image_segments(g), check_local_isometry(g),
                         check_injectivity(g)};
}

// ---------------------------------------------------------------------------
// Substitution of fractions through the tuple

namespace detail {

inline PLFunction psi_poly(const TropPoly& p, const GeneratorTuple& g) {
  PLFunction acc = pl_bottom();
  for (const auto& [e, c] : p.terms) {
    PLFunction term = pl_const(g.curve, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0)
        term = pl_add(term, pl_scale(g.fns[i], e[i], g.curve), g.curve);
    acc = pl_max(acc, term, g.curve);
  }
  return acc;
}

}  // namespace detail

inline PLFunction psi_apply(const RatFn& f, const GeneratorTuple& g) {
  if (f.n_vars != g.dim())
    throw Error("variable count does not match the tuple");
  if (f.is_bottom()) return pl_bottom();
  PLFunction num = detail::psi_poly(f.num, g);
  PLFunction den = detail::psi_poly(f.den, g);
  return pl_add(num, pl_neg(den, g.curve), g.curve);
}

inline bool verify_compat(const RatFn& f, const GeneratorTuple& g,
                          const std::vector<CurvePoint>& pts) {
  PLFunction lifted = psi_apply(f, g);
  for (const CurvePoint& x : pts) {
    ExtValue lhs = pl_eval(lifted, g.curve, x);
    ExtRational rhs = r_eval(f, theta_point(g, x));
    if (rhs.is_bottom()) {
      if (lhs.sign != -1) return false;
    } else {
      if (lhs.sign != 0 || lhs.v != rhs.value()) return false;
    }
  }
  return true;
}

inline RatFn pullback(const std::vector<RatFn>& theta_coords, const RatFn& f) {
  return substitute(f, theta_coords);
}

// ---------------------------------------------------------------------------
// Sampled sup/inf comparison between a set and its coordinate preimage

struct SupInfReport {
  ExtRational sup_v, inf_v;  // of f over the first sample set
  ExtRational sup_w, inf_w;  // of the pullback over the second
  bool sup_ok = false;       // sup_v >= sup_w
  bool inf_ok = false;       // inf_v <= inf_w
};

inline SupInfReport sup_inf_report(const RatFn& f,
                                   const std::vector<std::vector<Rat>>& v_samples,
                                   const std::vector<std::vector<Rat>>& w_samples,
                                   const std::vector<RatFn>& theta_coords) {
  if (v_samples.empty() || w_samples.empty())
    throw Error("sample sets must be nonempty");
  RatFn pulled = pullback(theta_coords, f);
  SupInfReport rep;
  bool first = true;
  for (const auto& x : v_samples) {
    ExtRational v = r_eval(f, x);
    if (first || rep.sup_v < v) rep.sup_v = v;
    if (first || v < rep.inf_v) rep.inf_v = v;
    first = false;
  }
  first = true;
  for (const auto& y : w_samples) {
    ExtRational v = r_eval(pulled, y);
    if (first || rep.sup_w < v) rep.sup_w = v;
    if (first || v < rep.inf_w) rep.inf_w = v;
    first = false;
  }
  rep.sup_ok = !(rep.sup_v < rep.sup_w);
  rep.inf_ok = !(rep.inf_w < rep.inf_v);
  return rep;
}

// ---------------------------------------------------------------------------
// Slope profiles of a fraction in one variable

// The integer slopes of the pieces of a one-variable fraction on (lo, hi),
// left to right. Used to certify parity obstructions: a substitution image
// through an even coordinate only produces even slopes.
inline std::vector<long long> univariate_interior_slopes(const RatFn& r,
                                                         const Rat& lo,
                                                         const Rat& hi) {
  if (r.n_vars != 1) throw Error("slope profile needs one variable");
  if (r.is_bottom() || !(lo < hi)) return {};
  std::vector<Rat> cuts = {lo, hi};
  auto add_cuts = [&](const TropPoly& p) {
    for (auto a = p.terms.begin(); a != p.terms.end(); ++a)
      for (auto b = std::next(a); b != p.terms.end(); ++b) {
        long long ea = a->first[0], eb = b->first[0];
        if (ea == eb) continue;
        Rat t = (b->second - a->second) / (ea - eb);
        if (t > lo && t < hi) cuts.push_back(t);
      }
  };
  add_cuts(r.num);
  add_cuts(r.den);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto dominant_exp = [](const TropPoly& p, const Rat& t) {
    long long best_e = 0;
    ExtRational best = ExtRational::neg_inf();
    for (const auto& [e, c] : p.terms) {
      ExtRational v{c + Rat(e[0]) * t};
      if (best.is_bottom() || best < v) {
        best = v;
        best_e = e[0];
      }
    }
    return best_e;
  };

  std::vector<long long> slopes;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rat mid = (cuts[i] + cuts[i + 1]) / 2;
    slopes.push_back(dominant_exp(r.num, mid) - dominant_exp(r.den, mid));
  }
  return slopes;
}

// ---------------------------------------------------------------------------
// Ready-made instances

// The doubly-infinite line with two coordinates: the first is 0 left of the
// marked unit segment, rises to 1 across it and stays 1; the second
// decreases with slope -1 on both tails and is 0 on the segment. The image
// is a vertical ray, a horizontal unit segment and another vertical ray.
inline GeneratorTuple line_tuple() {
  MetricGraph curve = make_graph(
      {true, false, false, true},
      {{1, 0, Length::inf()}, {1, 2, Length::fin(Rat(1))}, {2, 3, Length::inf()}});
  PLFunction f1, f2;
  f1.edges.resize(3);
  f1.edges[0].pts = {{Rat(0), Rat(0)}};
  f1.edges[1].pts = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}};
  f1.edges[2].pts = {{Rat(0), Rat(1)}};
  f2.edges.resize(3);
  f2.edges[0].pts = {{Rat(0), Rat(0)}};
  f2.edges[0].tail_slope = -1;
  f2.edges[1].pts = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}};
  f2.edges[2].pts = {{Rat(0), Rat(0)}};
  f2.edges[2].tail_slope = -1;
  return make_tuple(std::move(curve), {std::move(f1), std::move(f2)});
}

// The unit interval with the single coordinate 2t: a doubling map onto
// [0, 2] whose slope parity blocks odd-slope functions from its pullbacks.
inline GeneratorTuple doubled_interval_tuple() {
  MetricGraph curve = make_graph({false, false}, {{0, 1, Length::fin(Rat(1))}});
  PLFunction f;
  f.edges.resize(1);
  f.edges[0].pts = {{Rat(0), Rat(0)}, {Rat(1), Rat(2)}};
  return make_tuple(std::move(curve), {std::move(f)});
}

}  // namespace tropica
