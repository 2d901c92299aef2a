#include <gtest/gtest.h>

#include <vector>

#include "tropica/embed.hpp"
#include "tropica/gen.hpp"

namespace tropica {
namespace {

Rat q(long long num, long long den = 1) { return Rat(num, den); }

// theta on the line instance, addressed by the global coordinate t:
// t <= 0 lives on edge 0 at offset -t, [0,1] on edge 1, t >= 1 on edge 2.
CurvePoint line_at(Rat t) {
  if (t <= 0) return cp(0, -t);
  if (t <= 1) return cp(1, t);
  return cp(2, t - 1);
}

TEST(Embed, MakeTupleValidation) {
  GeneratorTuple g = line_tuple();
  EXPECT_EQ(g.dim(), 2);
  EXPECT_THROW(make_tuple(g.curve, {}), Error);
  EXPECT_THROW(make_tuple(g.curve, {pl_bottom(), g.fns[0]}), Error);
  PLFunction wrong;  // does not match the curve
  wrong.edges.resize(1);
  wrong.edges[0].pts = {{q(0), q(0)}};
  EXPECT_THROW(make_tuple(g.curve, {wrong}), Error);
}

TEST(Embed, ThetaPointFrozen) {
  GeneratorTuple g = line_tuple();
  EXPECT_EQ(theta_point(g, line_at(q(1, 2))), (std::vector<Rat>{q(1, 2), q(0)}));
  EXPECT_EQ(theta_point(g, line_at(q(-2))), (std::vector<Rat>{q(0), q(-2)}));
  EXPECT_EQ(theta_point(g, line_at(q(0))), (std::vector<Rat>{q(0), q(0)}));
  EXPECT_EQ(theta_point(g, line_at(q(1))), (std::vector<Rat>{q(1), q(0)}));
  EXPECT_EQ(theta_point(g, line_at(q(3))), (std::vector<Rat>{q(1), q(-2)}));
  EXPECT_THROW(theta_point(g, cp_inf(0)), InfinitePoint);

  // Constant generators send everything to the same point.
  MetricGraph seg = make_graph({false, false}, {{0, 1, Length::fin(q(2))}});
  GeneratorTuple c = make_tuple(seg, {pl_const(seg, q(3)), pl_const(seg, q(-1))});
  EXPECT_EQ(theta_point(c, cp(0, q(1, 3))), (std::vector<Rat>{q(3), q(-1)}));
}

TEST(Embed, ImageSegmentsLine) {
  GeneratorTuple g = line_tuple();
  std::vector<ImagePiece> pieces = image_segments(g);
  // One ray down from (0,0), the unit segment to (1,0), a ray down from
  // (1,0).
  ASSERT_EQ(pieces.size(), 3u);

  EXPECT_TRUE(pieces[0].ray);
  EXPECT_EQ(pieces[0].start, (std::vector<Rat>{q(0), q(0)}));
  EXPECT_EQ(pieces[0].slope, (std::vector<long long>{0, -1}));

  EXPECT_FALSE(pieces[1].ray);
  EXPECT_EQ(pieces[1].start, (std::vector<Rat>{q(0), q(0)}));
  EXPECT_EQ(pieces[1].end, (std::vector<Rat>{q(1), q(0)}));
  EXPECT_EQ(pieces[1].slope, (std::vector<long long>{1, 0}));
  EXPECT_EQ(pieces[1].length(), q(1));

  EXPECT_TRUE(pieces[2].ray);
  EXPECT_EQ(pieces[2].start, (std::vector<Rat>{q(1), q(0)}));
  EXPECT_EQ(pieces[2].slope, (std::vector<long long>{0, -1}));
}

TEST(Embed, ImageSegmentsDegenerate) {
  // Constant generators: the whole image is one point.
  MetricGraph r = make_graph({false, true}, {{0, 1, Length::inf()}});
  GeneratorTuple c = make_tuple(r, {pl_const(r, q(5))});
  std::vector<ImagePiece> pieces = image_segments(c);
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_FALSE(pieces[0].ray);
  EXPECT_EQ(pieces[0].length(), q(0));
  EXPECT_EQ(pieces[0].start, (std::vector<Rat>{q(5)}));
  EXPECT_EQ(pieces[0].end, pieces[0].start);

  // One even fold: [-1,1] with -|x| maps onto [-1,0] twice.
  MetricGraph seg = make_graph({false, false}, {{0, 1, Length::fin(q(2))}});
  PLFunction fold = chip_fire(seg, {{0, q(1), q(1), false}}, std::nullopt);
  GeneratorTuple f = make_tuple(seg, {fold});
  std::vector<ImagePiece> fp = image_segments(f);
  ASSERT_EQ(fp.size(), 2u);
  EXPECT_EQ(fp[0].start, (std::vector<Rat>{q(-1)}));
  EXPECT_EQ(fp[0].end, (std::vector<Rat>{q(0)}));
  EXPECT_EQ(fp[1].start, (std::vector<Rat>{q(0)}));
  EXPECT_EQ(fp[1].end, (std::vector<Rat>{q(-1)}));
}

TEST(Embed, LocalIsometryFrozen) {
  GeneratorTuple g = line_tuple();
  IsometryCheck iso = check_local_isometry(g);
  ASSERT_EQ(iso.gcds.size(), 3u);
  EXPECT_EQ(iso.gcds, (std::vector<long long>{1, 1, 1}));
  EXPECT_TRUE(iso.all_ok);

  // Slope 2 doubles lengths: gcd 2, rejected.
  IsometryCheck doubled = check_local_isometry(doubled_interval_tuple());
  ASSERT_EQ(doubled.gcds.size(), 1u);
  EXPECT_EQ(doubled.gcds[0], 2);
  EXPECT_FALSE(doubled.all_ok);

  // A constant segment has slope vector zero.
  MetricGraph seg = make_graph({false, false}, {{0, 1, Length::fin(q(1))}});
  IsometryCheck flat = check_local_isometry(
      make_tuple(seg, {pl_const(seg, q(0))}));
  EXPECT_EQ(flat.gcds[0], 0);
  EXPECT_FALSE(flat.all_ok);
}

TEST(Embed, InjectivityFrozen) {
  EXPECT_TRUE(check_injectivity(line_tuple()).injective);

  // The even fold has symmetric collisions.
  MetricGraph seg = make_graph({false, false}, {{0, 1, Length::fin(q(2))}});
  PLFunction fold = chip_fire(seg, {{0, q(1), q(1), false}}, std::nullopt);
  GeneratorTuple f = make_tuple(seg, {fold});
  InjectivityCheck inj = check_injectivity(f);
  EXPECT_FALSE(inj.injective);
  ASSERT_TRUE(inj.witness.has_value());
  auto [x, y] = *inj.witness;
  EXPECT_FALSE(same_point(seg, x, y));
  // The witness pair really collides: equal values of the generator.
  EXPECT_EQ(pl_eval(fold, seg, x), pl_eval(fold, seg, y));
  // And it is the symmetric pair around the crease.
  EXPECT_EQ(x.offset + y.offset, q(2));

  // Constants collapse everything.
  EXPECT_FALSE(
      check_injectivity(make_tuple(seg, {pl_const(seg, q(1))})).injective);
}

TEST(Embed, InjectivityTripod) {
  // Center with three unit legs; two distance-like coordinates separate all
  // branches.
  MetricGraph tri = make_graph({false, false, false, false},
                               {{0, 1, Length::fin(q(1))},
                                {0, 2, Length::fin(q(1))},
                                {0, 3, Length::fin(q(1))}});
  PLFunction f1, f2;
  f1.edges.resize(3);
  f2.edges.resize(3);
  // f1 rises along leg 1, falls along leg 2, flat on leg 3.
  f1.edges[0].pts = {{q(0), q(0)}, {q(1), q(1)}};
  f1.edges[1].pts = {{q(0), q(0)}, {q(1), q(-1)}};
  f1.edges[2].pts = {{q(0), q(0)}, {q(1), q(0)}};
  // f2 rises along leg 3 only.
  f2.edges[0].pts = {{q(0), q(0)}, {q(1), q(0)}};
  f2.edges[1].pts = {{q(0), q(0)}, {q(1), q(0)}};
  f2.edges[2].pts = {{q(0), q(0)}, {q(1), q(1)}};
  GeneratorTuple g = make_tuple(tri, {f1, f2});
  IsometryCheck iso = check_local_isometry(g);
  EXPECT_TRUE(iso.all_ok);
  EXPECT_TRUE(check_injectivity(g).injective);

  // Fold two legs onto each other: injectivity must fail with a witness on
  // distinct legs.
  PLFunction h = f1;
  h.edges[1].pts = {{q(0), q(0)}, {q(1), q(1)}};  // now mirrors leg 1
  GeneratorTuple bad = make_tuple(tri, {h, f2});
  InjectivityCheck inj = check_injectivity(bad);
  EXPECT_FALSE(inj.injective);
  ASSERT_TRUE(inj.witness.has_value());
  EXPECT_FALSE(same_point(tri, inj.witness->first, inj.witness->second));
  EXPECT_EQ(theta_point(bad, inj.witness->first),
            theta_point(bad, inj.witness->second));
}

TEST(Embed, InjectivityCollapsedTail) {
  // A flat tail collapses [T, inf) to one image point.
  MetricGraph r = make_graph({false, true}, {{0, 1, Length::inf()}});
  PLFunction f;
  f.edges.resize(1);
  f.edges[0].pts = {{q(0), q(0)}, {q(1), q(1)}};
  f.edges[0].tail_slope = 0;
  GeneratorTuple g = make_tuple(r, {f});
  InjectivityCheck inj = check_injectivity(g);
  EXPECT_FALSE(inj.injective);
  ASSERT_TRUE(inj.witness.has_value());
  EXPECT_EQ(theta_point(g, inj.witness->first),
            theta_point(g, inj.witness->second));
}

TEST(Embed, PsiApplyFrozen) {
  GeneratorTuple g = line_tuple();
  // X1 pulls back to the first generator.
  EXPECT_TRUE(pl_equal(psi_apply(r_var(2, 1), g), g.fns[0], g.curve));
  // Constants stay constant.
  EXPECT_TRUE(pl_equal(psi_apply(r_const(2, ExtRational(q(3))), g),
                       pl_const(g.curve, q(3)), g.curve));
  EXPECT_TRUE(psi_apply(r_bottom(2), g).bottom);

  // (X1 + X2) / X2 at t = 1/2 gives max(1/2, 0) - 0 = 1/2.
  RatFn f = r_mul(r_add(r_var(2, 1), r_var(2, 2)), r_inv(r_var(2, 2)));
  PLFunction lifted = psi_apply(f, g);
  EXPECT_EQ(pl_eval(lifted, g.curve, line_at(q(1, 2))), ExtValue::fin(q(1, 2)));
  EXPECT_EQ(pl_eval(lifted, g.curve, line_at(q(-3))), ExtValue::fin(q(3)));

  EXPECT_THROW(psi_apply(r_var(3, 1), g), Error);  // dimension mismatch
}

TEST(Embed, VerifyCompatFrozen) {
  GeneratorTuple g = line_tuple();
  std::vector<CurvePoint> pts;
  for (int i = -6; i <= 6; ++i) pts.push_back(line_at(q(i, 2)));

  RatFn f = r_mul(r_var(2, 1), r_inv(r_var(2, 2)));  // X1 / X2
  EXPECT_TRUE(verify_compat(f, g, pts));
  EXPECT_TRUE(verify_compat(r_const(2, ExtRational(q(7))), g, pts));
  EXPECT_TRUE(verify_compat(r_bottom(2), g, pts));
}

TEST(Embed, VerifyCompatRandom) {
  gen::Rng rng(3);
  GeneratorTuple g = line_tuple();
  std::vector<CurvePoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(line_at(rng.rat(-6, 6)));
  for (int trial = 0; trial < 100; ++trial) {
    RatFn f = gen::random_ratfn(rng, 2);
    EXPECT_TRUE(verify_compat(f, g, pts));
  }
}

TEST(Embed, PullbackFrozen) {
  // Coordinates Y*Y: the pullback of X is Y^2.
  std::vector<RatFn> coords = {r_pow(r_var(1, 1), 2)};
  RatFn pulled = pullback(coords, r_var(1, 1));
  EXPECT_EQ(r_equal(pulled, r_pow(r_var(1, 1), 2)).witness.has_value(), false);

  // Constants survive unchanged.
  RatFn c = r_const(1, ExtRational(q(-5, 2)));
  EXPECT_TRUE(r_equal(pullback(coords, c), c).equal());

  // Identity coordinates rename.
  std::vector<RatFn> id2 = {r_var(2, 1), r_var(2, 2)};
  RatFn f = r_add(r_var(2, 1), r_mul(r_var(2, 2), r_var(2, 2)));
  EXPECT_TRUE(r_equal(pullback(id2, f), f).equal());
}

TEST(Embed, PullbackHomomorphism) {
  gen::Rng rng(11);
  std::vector<RatFn> coords = {r_pow(r_var(1, 1), 2),
                               r_add(r_var(1, 1), r_const(1, ExtRational(1)))};
  for (int trial = 0; trial < 20; ++trial) {
    RatFn a = gen::random_ratfn(rng, 2);
    RatFn b = gen::random_ratfn(rng, 2);
    EXPECT_TRUE(r_equal(pullback(coords, r_add(a, b)),
                        r_add(pullback(coords, a), pullback(coords, b)))
                    .equal());
    EXPECT_TRUE(r_equal(pullback(coords, r_mul(a, b)),
                        r_mul(pullback(coords, a), pullback(coords, b)))
                    .equal());
  }
}

TEST(Embed, EvenSlopeObstruction) {
  // Pullbacks along Y^2 only have even slopes inside (0,1); the identity
  // has slope 1, so it is not a pullback.
  std::vector<RatFn> coords = {r_pow(r_var(1, 1), 2)};
  gen::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    RatFn f = gen::random_ratfn(rng, 1);
    if (f.is_bottom()) continue;
    RatFn pulled = pullback(coords, f);
    for (long long s : univariate_interior_slopes(pulled, q(0), q(1)))
      EXPECT_EQ(s % 2, 0);
  }
  std::vector<long long> ident = univariate_interior_slopes(r_var(1, 1), q(0), q(1));
  ASSERT_EQ(ident.size(), 1u);
  EXPECT_EQ(ident[0], 1);  // odd: not reachable through Y^2
}

TEST(Embed, UnivariateSlopes) {
  // max(2x, 1) on (0, 1): slope 2 past x = 1/2, slope 0 before.
  RatFn f = r_add(r_pow(r_var(1, 1), 2), r_const(1, ExtRational(1)));
  EXPECT_EQ(univariate_interior_slopes(f, q(0), q(1)),
            (std::vector<long long>{0, 2}));
  // A denominator subtracts its slope.
  RatFn ratio = r_mul(r_var(1, 1), r_inv(r_pow(r_var(1, 1), 3)));
  EXPECT_EQ(univariate_interior_slopes(ratio, q(-1), q(1)),
            (std::vector<long long>{-2}));
  EXPECT_TRUE(univariate_interior_slopes(r_bottom(1), q(0), q(1)).empty());
  EXPECT_THROW(univariate_interior_slopes(r_var(2, 1), q(0), q(1)), Error);
}

TEST(Embed, Functoriality) {
  // Composing coordinate substitutions equals composing the point maps.
  gen::Rng rng(29);
  auto eval_tuple = [](const std::vector<RatFn>& coords,
                       const std::vector<Rat>& x) {
    std::vector<Rat> out;
    for (const auto& c : coords) out.push_back(r_eval(c, x).value());
    return out;
  };
  for (int trial = 0; trial < 20; ++trial) {
    // inner: Q^2 -> Q^2, outer: Q^2 -> Q^2, all denominator-free so that
    // composition never degenerates.
    std::vector<RatFn> outer, inner;
    for (int i = 0; i < 2; ++i) {
      outer.push_back(r_from_poly(gen::random_poly(rng, 2, 3, 2)));
      inner.push_back(r_from_poly(gen::random_poly(rng, 2, 3, 2)));
    }
    std::vector<RatFn> composed;
    for (const auto& c : outer) composed.push_back(substitute(c, inner));
    for (int k = 0; k < 100; ++k) {
      std::vector<Rat> x = {rng.rat(), rng.rat()};
      EXPECT_EQ(eval_tuple(composed, x), eval_tuple(outer, eval_tuple(inner, x)));
    }
  }
}

TEST(Embed, SupInfFrozen) {
  // V = [0,2] with f = X against W = [0,1] through the doubling coordinate:
  // both extrema agree.
  std::vector<RatFn> coords = {r_pow(r_var(1, 1), 2)};
  std::vector<std::vector<Rat>> v_samples, w_samples;
  for (int i = 0; i <= 8; ++i) v_samples.push_back({q(i, 4)});   // [0, 2]
  for (int i = 0; i <= 8; ++i) w_samples.push_back({q(i, 8)});   // [0, 1]
  SupInfReport rep = sup_inf_report(r_var(1, 1), v_samples, w_samples, coords);
  EXPECT_EQ(rep.sup_v, ExtRational(q(2)));
  EXPECT_EQ(rep.sup_w, ExtRational(q(2)));
  EXPECT_EQ(rep.inf_v, ExtRational(q(0)));
  EXPECT_EQ(rep.inf_w, ExtRational(q(0)));
  EXPECT_TRUE(rep.sup_ok);
  EXPECT_TRUE(rep.inf_ok);

  // Constant functions make all four extrema equal.
  SupInfReport flat = sup_inf_report(r_const(1, ExtRational(q(3))), v_samples,
                                     w_samples, coords);
  EXPECT_EQ(flat.sup_v, flat.inf_v);
  EXPECT_EQ(flat.sup_v, flat.sup_w);
  EXPECT_EQ(flat.sup_w, flat.inf_w);

  EXPECT_THROW(sup_inf_report(r_var(1, 1), {}, w_samples, coords), Error);
}

TEST(Embed, SupInfSubsetMonotone) {
  // Shrinking the preimage samples keeps both inequalities.
  gen::Rng rng(31);
  std::vector<RatFn> coords = {r_pow(r_var(1, 1), 2)};
  for (int trial = 0; trial < 20; ++trial) {
    RatFn f = gen::random_ratfn(rng, 1);
    std::vector<std::vector<Rat>> v_samples, w_samples;
    for (int i = 0; i <= 8; ++i) v_samples.push_back({q(i, 4)});
    int k = static_cast<int>(rng.int_in(1, 8));
    for (int i = 0; i < k; ++i) w_samples.push_back({q(rng.int_in(0, 8), 8)});
    SupInfReport rep = sup_inf_report(f, v_samples, w_samples, coords);
    EXPECT_TRUE(rep.sup_ok);
    EXPECT_TRUE(rep.inf_ok);
  }
}

TEST(Embed, ImageWithinVariety) {
  // When the coordinates respect a presentation's generator pairs on the
  // sampled points, every image point lies in the presented set.
  GeneratorTuple g = line_tuple();
  // On the whole line, f1 >= f2 + ... the pair (X1 X2, X2) has equal sides
  // exactly where X1 = 0; instead use the always-valid pair from the
  // construction: max(X1, 0) agrees with X1 wherever f1 >= 0, which holds
  // everywhere on the image, so (X1 + 0, X1) is respected.
  RatFn lhs = r_add(r_var(2, 1), r_const(2, ExtRational(0)));
  RatFn rhs = r_var(2, 1);
  std::vector<CurvePoint> pts;
  for (int i = -8; i <= 8; ++i) pts.push_back(line_at(q(i, 2)));
  bool respected = true;
  for (const CurvePoint& x : pts) {
    ExtValue a = pl_eval(psi_apply(lhs, g), g.curve, x);
    ExtValue b = pl_eval(psi_apply(rhs, g), g.curve, x);
    if (a != b) respected = false;
  }
  EXPECT_TRUE(respected);
  // Hence the images satisfy the one-generator presentation.
  for (const CurvePoint& x : pts) {
    std::vector<Rat> p = theta_point(g, x);
    EXPECT_EQ(r_eval(lhs, p), r_eval(rhs, p));
  }
}

}  // namespace
}  // namespace tropica
