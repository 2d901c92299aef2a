#pragma once

// Self-contained verification suite behind the `verify-paper` subcommand.
// Each item re-derives its expected values from scratch (no stored baselines)
// and reports pass/fail with a short note; the laws hold for every seed, so a
// seed change must never flip a verdict.

#include <cstdint>
#include <exception>
#include <set>
#include <string>
#include <vector>

#include "tropica/congruence.hpp"
#include "tropica/curve.hpp"
#include "tropica/embed.hpp"
#include "tropica/gen.hpp"
#include "tropica/io.hpp"
#include "tropica/poly.hpp"
#include "tropica/ratfn.hpp"
#include "tropica/rational.hpp"
#include "tropica/variety.hpp"

namespace tropica::verify {

struct ItemResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string note;
};

namespace detail {

inline ItemResult fail(int id, std::string name, std::string note) {
  return ItemResult{id, std::move(name), false, std::move(note)};
}

inline ItemResult ok(int id, std::string name, std::string note = "") {
  return ItemResult{id, std::move(name), true, std::move(note)};
}

inline std::vector<Rat> int_point(gen::Rng& rng, int n, long long lo = -12,
                                  long long hi = 12) {
  std::vector<Rat> x;
  for (int i = 0; i < n; ++i) x.emplace_back(rng.int_in(lo, hi));
  return x;
}

inline std::vector<Rat> rat_point(gen::Rng& rng, int n) {
  std::vector<Rat> x;
  for (int i = 0; i < n; ++i) x.push_back(rng.rat());
  return x;
}

}  // namespace detail

// 1. A product with two distinct formal factors collapses to one function.
inline ItemResult item_products(std::uint64_t) {
  const std::string name = "products-equal-canonical";
  TropPoly left = make_poly(1, {{{1}, Rat(0)}, {{0}, Rat(0)}});
  TropPoly mid_a = make_poly(1, {{{2}, Rat(0)}, {{1}, Rat(-2)}, {{0}, Rat(0)}});
  TropPoly mid_b = make_poly(1, {{{2}, Rat(0)}, {{1}, Rat(-1)}, {{0}, Rat(0)}});
  if (mid_a.terms == mid_b.terms)
    return detail::fail(1, name, "factors should differ formally");
  TropPoly prod_a = p_mul(left, mid_a);
  TropPoly prod_b = p_mul(left, mid_b);
  if (!fn_equal(prod_a, prod_b).equal())
    return detail::fail(1, name, "products disagree as functions");
  std::map<Exps, Rat> want{{{0}, Rat(0)}, {{3}, Rat(0)}};
  if (canonicalize(prod_a).terms != want || canonicalize(prod_b).terms != want)
    return detail::fail(1, name, "canonical form is not the two-term one");
  return detail::ok(1, name);
}

// 2. Canonicalization is value-preserving and equality verdicts match a
//    dense sampling oracle; witnesses separate exactly.
inline ItemResult item_canonical(std::uint64_t seed) {
  const std::string name = "canonical-form-soundness";
  gen::Rng rng(seed * 8191 + 2);
  int scanned = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = rng.int_in(1, 3);
    TropPoly p = gen::random_poly(rng, n);
    TropPoly q = canonicalize(p);
    for (int k = 0; k < 100; ++k) {
      auto x = detail::rat_point(rng, n);
      if (!(p_eval(p, x) == p_eval(q, x)))
        return detail::fail(2, name, "canonicalize changed a value");
    }
    TropPoly other = (trial % 2 == 0) ? q : gen::random_poly(rng, n);
    EqualityVerdict v = fn_equal(p, other);
    if (v.witness) {
      if (p_eval(p, *v.witness) == p_eval(other, *v.witness))
        return detail::fail(2, name, "witness does not separate");
    } else {
      ++scanned;
      for (int k = 0; k < 10000; ++k) {
        auto x = detail::int_point(rng, n);
        if (!(p_eval(p, x) == p_eval(other, x)))
          return detail::fail(2, name, "verdict Equal but oracle disagrees");
      }
    }
  }
  return detail::ok(2, name, std::to_string(scanned) + " pairs oracle-scanned");
}

// 3. Twisted products give unions, concatenated generators intersections,
//    pointwise over a 41x41 grid.
inline ItemResult item_variety_laws(std::uint64_t seed) {
  const std::string name = "union-intersection-laws";
  gen::Rng rng(seed * 8191 + 3);
  auto small_presentation = [&rng]() {
    int n_gens = rng.int_in(1, 2);
    std::vector<GenPair> gens;
    for (int i = 0; i < n_gens; ++i)
      gens.emplace_back(gen::random_ratfn(rng, 2, 2, 2),
                        gen::random_ratfn(rng, 2, 2, 2));
    return presentation(2, std::move(gens));
  };
  for (int trial = 0; trial < 50; ++trial) {
    CongruencePresentation E = small_presentation();
    CongruencePresentation F = small_presentation();
    CongruencePresentation U = twisted_product(E, F);
    std::vector<GenPair> both = E.gens;
    both.insert(both.end(), F.gens.begin(), F.gens.end());
    CongruencePresentation I = presentation(2, std::move(both));
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        std::vector<Rat> x{Rat(-20 + i, 2), Rat(-20 + j, 2)};
        bool in_e = member(E, x), in_f = member(F, x);
        if (member(U, x) != (in_e || in_f))
          return detail::fail(3, name,
                              "union law fails at " + point_string(x));
        if (member(I, x) != (in_e && in_f))
          return detail::fail(3, name,
                              "intersection law fails at " + point_string(x));
      }
    }
  }
  return detail::ok(3, name, "50 pairs x 1681 grid points");
}

// 4. Pairs (f, f*t) with t != 0 present the empty set, and the detector
//    names the constant.
inline ItemResult item_scaling_pairs(std::uint64_t seed) {
  const std::string name = "scaling-pairs-empty";
  gen::Rng rng(seed * 8191 + 4);
  const Rat ts[4] = {Rat(1), Rat(-1), Rat(1, 2), Rat(3)};
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.int_in(1, 3);
    RatFn f = gen::random_ratfn(rng, n);
    Rat t = ts[trial % 4];
    RatFn scaled = r_mul(f, r_const(n, ExtRational(t)));
    CongruencePresentation E = presentation(n, {{f, scaled}});
    if (!is_empty(E))
      return detail::fail(4, name, "cells are nonempty for t=" + rat_string(t));
    auto hit = detect_scaling_pair(E);
    if (!hit || !(hit->second == ExtRational(t)))
      return detail::fail(4, name, "detector missed t=" + rat_string(t));
  }
  return detail::ok(4, name);
}

// 5. Exact chip-firing shape: value -min(distance, level), range, zero set.
inline ItemResult item_chip_firing(std::uint64_t seed) {
  const std::string name = "chip-firing-formula";
  gen::Rng rng(seed * 8191 + 5);
  for (int trial = 0; trial < 50; ++trial) {
    MetricGraph g = gen::random_curve(rng);
    Subgraph s = gen::random_subgraph(rng, g);
    std::optional<Rat> l;
    if (!rng.chance(1, 4)) l = rng.positive_rat();
    PLFunction h = chip_fire(g, s, l);
    for (int k = 0; k < 100; ++k) {
      CurvePoint x = gen::random_point(rng, g);
      std::optional<Rat> dist = dist_to_subgraph(g, s, x);
      if (!dist)
        return detail::fail(5, name, "finite point at infinite distance");
      Rat d = *dist;
      Rat want = -d;
      if (l && *l < d) want = -*l;
      ExtValue got = pl_eval(h, g, x);
      if (got.sign != 0 || got.v != want)
        return detail::fail(5, name, "formula mismatch at " + point_text(g, x));
      if (got.v > 0 || (l && got.v < -*l))
        return detail::fail(5, name, "value outside [-l, 0]");
      if ((got.v == 0) != (d == 0))
        return detail::fail(5, name, "zero set differs from the subgraph");
    }
  }
  return detail::ok(5, name);
}

// 6. Principal divisors on compact curves have degree zero.
inline ItemResult item_divisor_degree(std::uint64_t seed) {
  const std::string name = "divisor-degree-zero";
  gen::Rng rng(seed * 8191 + 6);
  for (int trial = 0; trial < 100; ++trial) {
    MetricGraph g = gen::random_curve(rng, 8, /*allow_infinite=*/false);
    PLFunction f = gen::random_pl(rng, g);
    long long deg = divisor_degree(divisor(f, g));
    if (deg != 0)
      return detail::fail(6, name, "degree " + std::to_string(deg));
  }
  return detail::ok(6, name);
}

// 7. The two-ray line instance: image shape, primitive directions,
//    injectivity.
inline ItemResult item_line_instance(std::uint64_t) {
  const std::string name = "line-image-certificates";
  GeneratorTuple t = line_tuple();
  EmbeddingReport rep = embedding_report(t);
  const auto& segs = rep.segments;
  auto vec = [](long long a, long long b) {
    return std::vector<long long>{a, b};
  };
  auto rats = [](const Rat& a, const Rat& b) { return std::vector<Rat>{a, b}; };
  if (segs.size() != 3) return detail::fail(7, name, "expected 3 pieces");
  bool shape = segs[0].ray && segs[0].start == rats(Rat(0), Rat(0)) &&
               segs[0].slope == vec(0, -1) && !segs[1].ray &&
               segs[1].start == rats(Rat(0), Rat(0)) &&
               segs[1].end == rats(Rat(1), Rat(0)) &&
               segs[1].slope == vec(1, 0) && segs[1].length() == 1 &&
               segs[2].ray && segs[2].start == rats(Rat(1), Rat(0)) &&
               segs[2].slope == vec(0, -1);
  if (!shape) return detail::fail(7, name, "image shape is wrong");
  if (rep.isometry.gcds != std::vector<long long>{1, 1, 1} ||
      !rep.isometry.all_ok)
    return detail::fail(7, name, "a direction is not primitive");
  if (!rep.injectivity.injective || rep.injectivity.witness)
    return detail::fail(7, name, "injectivity check failed");
  return detail::ok(7, name);
}

// 8. Substituting the generators agrees with evaluating at the image point.
inline ItemResult item_compatibility(std::uint64_t seed) {
  const std::string name = "substitution-compatibility";
  gen::Rng rng(seed * 8191 + 8);
  for (int c = 0; c < 5; ++c) {
    MetricGraph g = gen::random_curve(rng);
    int dim = rng.int_in(1, 3);
    GeneratorTuple tup = gen::random_tuple(rng, g, dim);
    std::vector<CurvePoint> pts;
    for (int k = 0; k < 20; ++k) pts.push_back(gen::random_point(rng, g));
    for (int i = 0; i < 20; ++i) {
      RatFn f = gen::random_ratfn(rng, dim);
      if (!verify_compat(f, tup, pts))
        return detail::fail(8, name, "mismatch on curve " + std::to_string(c));
    }
  }
  return detail::ok(8, name, "100 fractions x 20 points");
}

// 9. Substitution composes: pushing through two coordinate tuples in one
//    step or two gives the same function.
inline ItemResult item_functoriality(std::uint64_t seed) {
  const std::string name = "coordinate-composition";
  gen::Rng rng(seed * 8191 + 9);
  for (int trial = 0; trial < 20; ++trial) {
    int k = rng.int_in(1, 2), m = rng.int_in(1, 2), n = rng.int_in(1, 2);
    std::vector<RatFn> g, h;
    for (int i = 0; i < n; ++i)
      g.push_back(r_from_poly(gen::random_poly(rng, m, 3, 2)));
    for (int i = 0; i < m; ++i)
      h.push_back(r_from_poly(gen::random_poly(rng, k, 3, 2)));
    RatFn f = gen::random_ratfn(rng, n);
    RatFn two_steps = substitute(substitute(f, g), h);
    std::vector<RatFn> composed;
    for (const RatFn& gi : g) composed.push_back(substitute(gi, h));
    RatFn one_step = substitute(f, composed);
    for (int p = 0; p < 100; ++p) {
      auto x = detail::rat_point(rng, k);
      if (!(r_eval(two_steps, x) == r_eval(one_step, x)))
        return detail::fail(9, name, "composition differs at " + point_string(x));
    }
  }
  return detail::ok(9, name);
}

// 10. Every pullback through the doubling coordinate has even slopes, so the
//     identity (slope 1) is not a pullback.
inline ItemResult item_even_slopes(std::uint64_t seed) {
  const std::string name = "even-slope-obstruction";
  gen::Rng rng(seed * 8191 + 10);
  std::vector<RatFn> doubling{r_pow(r_var(1, 1), 2)};
  for (int trial = 0; trial < 50; ++trial) {
    RatFn f = gen::random_ratfn(rng, 1);
    RatFn pulled = pullback(doubling, f);
    for (long long s : univariate_interior_slopes(pulled, Rat(0), Rat(1)))
      if (s % 2 != 0)
        return detail::fail(10, name, "odd slope " + std::to_string(s));
  }
  auto id_slopes = univariate_interior_slopes(r_var(1, 1), Rat(0), Rat(1));
  if (id_slopes != std::vector<long long>{1})
    return detail::fail(10, name, "identity should have slope profile {1}");
  return detail::ok(10, name, "identity slope 1 is odd, hence not a pullback");
}

// 11. Sampled sup/inf comparisons: exact equalities on the doubled interval,
//     inequalities whenever the first sample set covers the image of the
//     second.
inline ItemResult item_sup_inf(std::uint64_t seed) {
  const std::string name = "sup-inf-bounds";
  std::vector<RatFn> doubling{r_pow(r_var(1, 1), 2)};
  std::vector<std::vector<Rat>> v_samples, w_samples;
  for (int i = 0; i <= 4; ++i) {
    v_samples.push_back({Rat(i, 2)});  // [0,2] in steps of 1/2
    w_samples.push_back({Rat(i, 4)});  // [0,1] in steps of 1/4
  }
  SupInfReport rep =
      sup_inf_report(r_var(1, 1), v_samples, w_samples, doubling);
  if (!rep.sup_ok || !rep.inf_ok || !(rep.sup_v == ExtRational(Rat(2))) ||
      !(rep.sup_w == ExtRational(Rat(2))) ||
      !(rep.inf_v == ExtRational(Rat(0))) ||
      !(rep.inf_w == ExtRational(Rat(0))))
    return detail::fail(11, name, "doubled-interval extrema are off");

  gen::Rng rng(seed * 8191 + 11);
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.int_in(1, 2), n = rng.int_in(1, 2);
    std::vector<RatFn> coords;
    for (int i = 0; i < n; ++i) coords.push_back(gen::random_ratfn(rng, m));
    std::vector<std::vector<Rat>> ws, vs;
    for (int k = 0; k < 10; ++k) {
      auto w = detail::rat_point(rng, m);
      std::vector<Rat> image;
      for (const RatFn& c : coords) image.push_back(r_eval(c, w).value());
      ws.push_back(std::move(w));
      vs.push_back(std::move(image));
    }
    for (int k = 0; k < 5; ++k) vs.push_back(detail::rat_point(rng, n));
    SupInfReport r = sup_inf_report(gen::random_ratfn(rng, n), vs, ws, coords);
    if (!r.sup_ok || !r.inf_ok)
      return detail::fail(11, name, "bound violated on a random instance");
  }
  return detail::ok(11, name);
}

// 12. Every emitted cell is described by equalities and non-strict
//     inequalities only; nothing strict leaks into the artifacts.
inline ItemResult item_closed_cells(std::uint64_t seed) {
  const std::string name = "closed-cell-structure";
  gen::Rng rng(seed * 8191 + 12);
  long long n_cells = 0;
  auto inspect = [&n_cells](const PolyComplex& pc) -> const char* {
    io::Json j = io::complex_json(pc);
    for (const auto& cell : j["cells"]) {
      ++n_cells;
      std::set<std::string> keys;
      for (auto it = cell.begin(); it != cell.end(); ++it) keys.insert(it.key());
      if (keys != std::set<std::string>{"eq", "ge"})
        return "cell emits a relation besides eq/ge";
      for (const char* kind : {"eq", "ge"})
        for (const auto& row : cell[kind])
          if (static_cast<int>(row.size()) != pc.n_vars + 1)
            return "row arity is off";
    }
    return nullptr;
  };
  for (int trial = 0; trial < 30; ++trial) {
    int n = rng.int_in(1, 3);
    int n_gens = rng.int_in(1, 2);
    std::vector<GenPair> gens;
    for (int i = 0; i < n_gens; ++i)
      gens.emplace_back(gen::random_ratfn(rng, n, 2, 2),
                        gen::random_ratfn(rng, n, 2, 2));
    if (const char* bad = inspect(variety_cells(presentation(n, gens))))
      return detail::fail(12, name, bad);
    if (const char* bad =
            inspect(pair_locus_cells(gens[0].first, gens[0].second)))
      return detail::fail(12, name, bad);
  }
  if (n_cells == 0) return detail::fail(12, name, "no cells were emitted");
  return detail::ok(12, name, std::to_string(n_cells) + " cells inspected");
}

inline std::vector<ItemResult> run_all(std::uint64_t seed) {
  using Item = ItemResult (*)(std::uint64_t);
  const Item items[] = {
      item_products,      item_canonical,     item_variety_laws,
      item_scaling_pairs, item_chip_firing,   item_divisor_degree,
      item_line_instance, item_compatibility, item_functoriality,
      item_even_slopes,   item_sup_inf,       item_closed_cells,
  };
  std::vector<ItemResult> out;
  int id = 1;
  for (Item item : items) {
    try {
      out.push_back(item(seed));
    } catch (const std::exception& ex) {
      out.push_back(detail::fail(id, "item-" + std::to_string(id),
                                 std::string("exception: ") + ex.what()));
    }
    ++id;
  }
  return out;
}

}  // namespace tropica::verify
