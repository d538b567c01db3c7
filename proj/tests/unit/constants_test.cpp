#include <cmath>

#include <gtest/gtest.h>

#include "hcv/constants.hpp"
#include "hcv/error.hpp"

namespace hcv {
namespace {

TEST(Sector, ValidateBounds) {
  EXPECT_NO_THROW((SectorSpec{0.5, 2.0, 0.0, 0.25}.validate()));
  EXPECT_THROW((SectorSpec{1.0, 2.0, 0.0, 0.25}.validate()), Error);
  EXPECT_THROW((SectorSpec{0.5, 1.0, 0.0, 0.25}.validate()), Error);
  EXPECT_THROW((SectorSpec{0.5, 2.0, 0.3, 0.25}.validate()), Error);
  EXPECT_THROW((SectorSpec{0.5, 2.0, 0.0, 1.5}.validate()), Error);
}

TEST(Sector, FromIndexMatchesCover) {
  const auto s = SectorSpec::from_index(4, 2);
  EXPECT_DOUBLE_EQ(s.r0, 0.25);
  EXPECT_DOUBLE_EQ(s.R0, 4.0);
  EXPECT_DOUBLE_EQ(s.theta0, 0.5);
  EXPECT_DOUBLE_EQ(s.thetaT, 0.75);
  EXPECT_THROW(SectorSpec::from_index(1, 0), Error);
  EXPECT_THROW(SectorSpec::from_index(3, 4), Error);
}

TEST(Sector, Contains) {
  const SectorSpec s{0.5, 2.0, 0.0, 0.25};
  EXPECT_TRUE(s.contains(Complex(1.0, 0.0)));
  EXPECT_TRUE(s.contains(Complex(0.0, 2.0)));
  EXPECT_FALSE(s.contains(Complex(-1.0, 0.0)));
  EXPECT_FALSE(s.contains(Complex(0.1, 0.0)));
}

TEST(Constants, DeriveFormulas) {
  const auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 1.5, 12.0 * kPi, 0.125, 0.2);
  EXPECT_EQ(c.c4, 0.5 * 0.2 / 2.0);
  EXPECT_EQ(c.m0, 151);
  EXPECT_EQ(c.k0, 25);
  EXPECT_TRUE(c.violations().empty());
  EXPECT_EQ(m0_formula(2.0, 12.0 * kPi, 0.5), 151);
  EXPECT_EQ(k0_formula(1.5, 0.125), 25);
}

TEST(Constants, ViolationsReported) {
  auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 0.5, 0.2);
  c.c4 = 0.3;
  EXPECT_FALSE(c.violations().empty());
  c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 0.5, 0.2);
  c.m0 += 1;
  EXPECT_FALSE(c.violations().empty());
  c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 1.5, 0.2);
  EXPECT_FALSE(c.violations().empty());
}

TEST(Constants, SoftWarnings) {
  const auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 1.125, 113.0, 0.03, 0.9);
  EXPECT_TRUE(c.violations().empty());
  ASSERT_EQ(c.warnings().size(), 1u);
  EXPECT_EQ(c.warnings()[0], "c0 <= 2");
}

TEST(Constants, C3AgainstLiminf) {
  const auto seq = ComplexSequence::polynomial({0.0, 0.0, 1.0});
  auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 0.5, 0.9);
  const auto ok = check_c3(c, seq, 10000);
  EXPECT_TRUE(ok.ok);
  EXPECT_NEAR(ok.liminf_estimate, 2.0, 1e-3);
  c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 0.5, 1.1);
  EXPECT_FALSE(check_c3(c, seq, 10000).ok);
}

TEST(Constants, JsonRoundTripKeepsOverrides) {
  auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 2.5, 3.0, 0.5, 0.2);
  c.n0 = 42;
  const auto back = constants_from_json(to_json(c));
  EXPECT_EQ(back.m0, c.m0);
  EXPECT_EQ(back.k0, c.k0);
  EXPECT_EQ(back.c4, c.c4);
  EXPECT_EQ(back.n0, c.n0);
  auto j = to_json(c);
  j["c4"] = 0.3;
  EXPECT_EQ(constants_from_json(j).c4, 0.3);
  j.erase("c1");
  EXPECT_THROW(constants_from_json(j), Error);
}

}  // namespace
}  // namespace hcv
