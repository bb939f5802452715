#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ssmc/fixed_point.hpp"
#include "ssmc/integer.hpp"
#include "ssmc/rotation.hpp"

using namespace ssmc;

namespace {

FixedPoint q(int64_t m, int p = 8) { return FixedPoint(Integer(m), p); }
FixedPoint lit(const char* s, int p = 8) { return FixedPoint::parse(s, p); }

}  // namespace

TEST(Integer, RoundShiftTiesToEven) {
  EXPECT_EQ(round_shift_right(Integer(5), 1), Integer(2));
  EXPECT_EQ(round_shift_right(Integer(7), 1), Integer(4));
  EXPECT_EQ(round_shift_right(Integer(-5), 1), Integer(-2));
  EXPECT_EQ(round_shift_right(Integer(-7), 1), Integer(-4));
  EXPECT_EQ(round_shift_right(Integer(6), 2), Integer(2));
  EXPECT_EQ(round_shift_right(Integer(10), 2), Integer(2));
}

TEST(Integer, SquareRoots) {
  EXPECT_EQ(isqrt_round(Integer(8)), Integer(3));
  EXPECT_EQ(isqrt_round(Integer(6)), Integer(2));
  EXPECT_EQ(isqrt_floor(Integer(15)), Integer(3));
  EXPECT_EQ(isqrt_floor(Integer(16)), Integer(4));
  EXPECT_EQ(isqrt_floor(Integer(0)), Integer(0));
}

TEST(Integer, DivRoundEven) {
  EXPECT_EQ(div_round_even(Integer(7), Integer(2)), Integer(4));
  EXPECT_EQ(div_round_even(Integer(5), Integer(2)), Integer(2));
  EXPECT_EQ(div_round_even(Integer(-5), Integer(2)), Integer(-2));
  EXPECT_EQ(div_round_even(Integer(10), Integer(3)), Integer(3));
  EXPECT_THROW(div_round_even(Integer(1), Integer(0)), std::exception);
}

TEST(Integer, OverflowPromotesToBig) {
  Integer a(INT64_MAX);
  Integer b = a + Integer(1);
  EXPECT_FALSE(b.is_small());
  EXPECT_EQ(b.to_string(), "9223372036854775808");
  EXPECT_EQ(b - Integer(1), a);
  EXPECT_TRUE((b - Integer(1)).is_small());
  Integer sq = a * a;
  EXPECT_EQ(sq.to_string(), "85070591730234615847396907784232501249");
  EXPECT_EQ(Integer::parse("85070591730234615847396907784232501249"), sq);
  EXPECT_GT(sq, a);
  EXPECT_LT(-sq, Integer(INT64_MIN));
}

TEST(Integer, LeadingZerosAreDecimal) {
  EXPECT_EQ(Integer::parse("075"), Integer(75));
  EXPECT_EQ(Integer::parse("-0010"), Integer(-10));
  EXPECT_EQ(Integer::parse("000"), Integer(0));
  EXPECT_EQ(lit("0.75", 2).mantissa(), Integer(3));
  EXPECT_EQ(lit("-0.09375", 5).mantissa(), Integer(-3));
}

TEST(Integer, BigAndSmallPathsAgree) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> d(-(int64_t(1) << 40), int64_t(1) << 40);
  for (int i = 0; i < 2000; ++i) {
    int64_t x = d(rng), y = d(rng);
    Integer big_x{BigInt(x)}, big_y{BigInt(y)};
    EXPECT_EQ((Integer(x) * Integer(y)).to_big(), BigInt(x) * BigInt(y));
    EXPECT_EQ(Integer(x) + Integer(y), big_x + big_y);
    EXPECT_EQ(round_shift_right(Integer(x) * Integer(y), 13), round_shift_right(big_x * big_y, 13));
    EXPECT_EQ(Integer(x) <=> Integer(y), big_x <=> big_y);
  }
}

TEST(FixedPoint, FrozenValues) {
  EXPECT_EQ(FixedPoint::from_ratio(Integer(1), Integer(3), 8).mantissa(), Integer(85));
  EXPECT_EQ(FixedPoint::from_ratio(Integer(1), Integer(3), 8).to_string(), "0.33203125");
  EXPECT_EQ(fp_sqrt(FixedPoint::from_int(2, 8)).mantissa(), Integer(362));
  EXPECT_EQ(lit("-1.25").mantissa(), Integer(-320));
  EXPECT_THROW(lit("0.001"), std::invalid_argument);
}

TEST(FixedPoint, MultiplyRoundsHalfToEven) {
  EXPECT_EQ(fp_mul(lit("0.75", 2), lit("0.5", 2)), lit("0.5", 2));
  EXPECT_EQ(fp_mul(lit("0.25", 2), lit("0.5", 2)), lit("0", 2));
  EXPECT_EQ(fp_mul(lit("-0.75", 2), lit("0.5", 2)), lit("-0.5", 2));
}

TEST(FixedPoint, PrecisionChecks) {
  EXPECT_THROW(FixedPoint(Integer(1), 0), std::invalid_argument);
  EXPECT_THROW(FixedPoint(Integer(1), 65), std::invalid_argument);
  EXPECT_THROW(fp_add(q(1, 8), q(1, 9)), std::invalid_argument);
}

TEST(FixedPoint, MulErrorBound) {
  std::mt19937_64 rng(1);
  for (int p : {4, 8, 16, 40}) {
    std::uniform_int_distribution<int64_t> d(-(int64_t(1) << (p + 6)), int64_t(1) << (p + 6));
    for (int i = 0; i < 3000; ++i) {
      FixedPoint a = q(d(rng), p), b = q(d(rng), p);
      // exact product has 2p fractional bits; compare on that grid
      BigInt exact = a.mantissa().to_big() * b.mantissa().to_big();
      BigInt got = fp_mul(a, b).mantissa().to_big() << p;
      BigInt err = abs(got - exact);
      EXPECT_LE(err, BigInt(1) << (p - 1)) << a.to_string() << " * " << b.to_string();
    }
  }
}

TEST(FixedPoint, MulAddIntoMatchesComposition) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> d(-5000, 5000);
  for (int i = 0; i < 2000; ++i) {
    FixedPoint h = q(d(rng)), g = q(d(rng)), b = q(d(rng));
    FixedPoint want = fp_add(fp_mul(g, h), b);
    fp_mul_add_into(h, g, b);
    EXPECT_EQ(h, want);
  }
  FixedPoint big = q(INT64_MAX / 2, 8);
  FixedPoint want = fp_add(fp_mul(q(1 << 12), big), q(1));
  fp_mul_add_into(big, q(1 << 12), q(1));
  EXPECT_EQ(big, want);
}

TEST(RmsNorm, FrozenValues) {
  FixedVector a = rms_norm({lit("3"), lit("4")});
  EXPECT_EQ(a[0].to_string(), "0.84765625");
  EXPECT_EQ(a[1].to_string(), "1.1328125");
  FixedVector b = rms_norm({lit("1"), lit("-2"), lit("3")});
  EXPECT_EQ(b[0].to_string(), "0.46484375");
  EXPECT_EQ(b[1].to_string(), "-0.92578125");
  EXPECT_EQ(b[2].to_string(), "1.390625");
  EXPECT_THROW(rms_norm({q(1), q(1)}), std::domain_error);
  EXPECT_THROW(rms_norm({q(0), q(0), q(0)}), std::domain_error);
}

TEST(RmsNorm, ConstantVectorsAreScaleInvariant) {
  for (int n = 1; n <= 8; ++n)
    for (int64_t m = 129; m <= 5000; m += 37) {
      for (int64_t sgn : {1, -1}) {
        FixedVector v(static_cast<size_t>(n), q(sgn * m));
        for (const auto& x : rms_norm(v)) EXPECT_EQ(x, FixedPoint::from_int(sgn, 8));
      }
    }
}

TEST(RmsNorm, InplaceMatchesCopy) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> d(-3000, 3000);
  for (int i = 0; i < 500; ++i) {
    FixedVector v(1 + rng() % 7);
    for (auto& x : v) x = q(d(rng));
    v[0] = q(1000);
    FixedVector w = v;
    rms_norm_inplace(w.data(), w.size());
    EXPECT_EQ(w, rms_norm(v));
  }
}

TEST(RmsNorm, OutputRmsNearOne) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int64_t> d(-(1 << 20), 1 << 20);
  for (int i = 0; i < 500; ++i) {
    FixedVector v(1 + rng() % 8);
    for (auto& x : v) x = q(d(rng), 16);
    v[0] = q(1 << 20, 16);
    double ss = 0;
    for (const auto& x : rms_norm(v)) ss += x.to_double() * x.to_double();
    EXPECT_NEAR(std::sqrt(ss / static_cast<double>(v.size())), 1.0, 1e-3);
  }
}

TEST(Sigmoid, Values) {
  EXPECT_EQ(fp_sigmoid(q(0)).to_string(), "0.5");
  EXPECT_NEAR(fp_sigmoid(lit("2")).to_double(), 1 / (1 + std::exp(-2.0)), 1.0 / 512);
  EXPECT_NEAR(fp_sigmoid(lit("-3.5")).to_double(), 1 / (1 + std::exp(3.5)), 1.0 / 512);
}

TEST(Rotation, Identities) {
  UnitRotation r(2, 6);
  EXPECT_EQ(r.num(), 1u);
  EXPECT_EQ(r.den(), 3u);
  EXPECT_EQ(rot_pow(r, 3), UnitRotation::identity());
  EXPECT_EQ(rot_mul(UnitRotation(1, 2), UnitRotation(1, 2)), UnitRotation::identity());
  EXPECT_EQ(rot_mul(UnitRotation(1, 4), UnitRotation(1, 6)), UnitRotation(5, 12));
  EXPECT_TRUE(UnitRotation(1, 2).is_real());
  EXPECT_FALSE(UnitRotation(1, 3).is_real());
  EXPECT_EQ(UnitRotation::parse("3/7").to_string(), "3/7");
  EXPECT_THROW(UnitRotation(1, 0), std::invalid_argument);
  EXPECT_THROW(UnitRotation::parse("x"), std::invalid_argument);
}

TEST(Rotation, PowerMatchesRepeatedProduct) {
  for (uint64_t k : {2u, 3u, 5u, 7u, 12u}) {
    UnitRotation step(1, k), acc;
    for (uint64_t n = 0; n < 50; ++n) {
      EXPECT_EQ(acc, rot_pow(step, n));
      EXPECT_EQ(acc.is_identity(), n % k == 0);
      acc = rot_mul(acc, step);
    }
  }
}
