#include "tropica/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tropica;

namespace {

ExtRational bot() { return ExtRational::neg_inf(); }

Rat q(long long p, long long d = 1) { return Rat(p, d); }

}  // namespace

TEST(Scalar, AddIsMaxWithNeutralBottom) {
  EXPECT_EQ(t_add(ExtRational(3), bot()), ExtRational(3));
  EXPECT_EQ(t_add(bot(), ExtRational(3)), ExtRational(3));
  EXPECT_EQ(t_add(ExtRational(2), ExtRational(5)), ExtRational(5));
  EXPECT_EQ(t_add(bot(), bot()), bot());
  EXPECT_EQ(t_add(ExtRational(q(1, 2)), ExtRational(q(1, 3))), ExtRational(q(1, 2)));
}

TEST(Scalar, MulIsSumWithAbsorbingBottom) {
  EXPECT_EQ(t_mul(ExtRational(2), ExtRational(3)), ExtRational(5));
  EXPECT_EQ(t_mul(ExtRational(7), bot()), bot());
  EXPECT_EQ(t_mul(bot(), ExtRational(7)), bot());
  EXPECT_EQ(t_mul(ExtRational(q(-1, 2)), ExtRational(q(1, 2))), ExtRational(0));
}

TEST(Scalar, InverseNegatesAndRejectsBottom) {
  EXPECT_EQ(t_inv(ExtRational(3)), ExtRational(-3));
  EXPECT_EQ(t_inv(ExtRational(0)), ExtRational(0));
  EXPECT_EQ(t_inv(ExtRational(q(5, 2))), ExtRational(q(-5, 2)));
  EXPECT_THROW(t_inv(bot()), InversionOfBottom);
  EXPECT_EQ(t_mul(ExtRational(q(7, 3)), t_inv(ExtRational(q(7, 3)))), ExtRational(0));
}

TEST(Scalar, TotalOrderPutsBottomLowest) {
  EXPECT_LT(bot(), ExtRational(q(-1000)));
  EXPECT_FALSE(bot() < bot());
  EXPECT_LE(bot(), bot());
  EXPECT_GT(ExtRational(q(1, 7)), ExtRational(q(1, 8)));
}

// Semifield laws on sampled triples, including bottom.
TEST(Scalar, SemifieldLawsSampled) {
  std::mt19937_64 rng(7);
  auto pick = [&]() -> ExtRational {
    if (rng() % 8 == 0) return bot();
    long long p = static_cast<long long>(rng() % 41) - 20;
    long long d = 1 + static_cast<long long>(rng() % 6);
    return ExtRational(q(p, d));
  };
  for (int i = 0; i < 500; ++i) {
    ExtRational a = pick(), b = pick(), c = pick();
    EXPECT_EQ(t_add(a, b), t_add(b, a));
    EXPECT_EQ(t_mul(a, b), t_mul(b, a));
    EXPECT_EQ(t_add(t_add(a, b), c), t_add(a, t_add(b, c)));
    EXPECT_EQ(t_mul(t_mul(a, b), c), t_mul(a, t_mul(b, c)));
    EXPECT_EQ(t_mul(a, t_add(b, c)), t_add(t_mul(a, b), t_mul(a, c)));
    EXPECT_EQ(t_add(a, bot()), a);
    EXPECT_EQ(t_mul(a, ExtRational(0)), a);
    EXPECT_EQ(t_mul(a, bot()), bot());
  }
}

TEST(Scalar, RationalParsingRoundTrip) {
  EXPECT_EQ(parse_rational("3/4"), q(3, 4));
  EXPECT_EQ(parse_rational("-3/4"), q(-3, 4));
  EXPECT_EQ(parse_rational("6/4"), q(3, 2));
  EXPECT_EQ(parse_rational("17"), q(17));
  EXPECT_EQ(parse_rational("0"), q(0));
  EXPECT_EQ(rat_string(q(-3, 4)), "-3/4");
  EXPECT_EQ(rat_string(q(4, 2)), "2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("a"), Error);
  EXPECT_THROW(parse_rational("1/2/3"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Scalar, FloorAndIntegrality) {
  EXPECT_EQ(rat_floor(q(7, 2)), Int(3));
  EXPECT_EQ(rat_floor(q(-7, 2)), Int(-4));
  EXPECT_EQ(rat_floor(q(6, 2)), Int(3));
  EXPECT_EQ(rat_floor(q(-6, 2)), Int(-3));
  EXPECT_TRUE(rat_is_integer(q(8, 4)));
  EXPECT_FALSE(rat_is_integer(q(8, 5)));
}

TEST(Scalar, Strings) {
  EXPECT_EQ(bot().str(), "-inf");
  EXPECT_EQ(ExtRational(q(-5, 3)).str(), "-5/3");
  EXPECT_EQ(point_string({q(1, 2), q(-3)}), "(1/2, -3)");
}
