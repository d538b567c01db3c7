#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <gtest/gtest.h>

#include "hcv/error.hpp"
#include "hcv/partition.hpp"
#include "hcv/properties.hpp"

namespace hcv {
namespace {

const ComplexSequence& squares() {
  static const ComplexSequence s = ComplexSequence::polynomial({0.0, 0.0, 1.0});
  return s;
}

ConstantsBundle feasible(SectorSpec s = {0.99, 1.01, 0.0, 0.25}) {
  return ConstantsBundle::derive(s, 2.001, 2.001, 0.999, 0.95);
}

void expect_structure(const SectorPartition& sp) {
  const auto& c = sp.constants;
  ASSERT_FALSE(sp.r_sequence.empty());
  EXPECT_EQ(sp.r_sequence.front(), c.r0);
  for (std::size_t nu = 1; nu < sp.r_sequence.size(); ++nu) {
    const double step = sp.r_sequence[nu] - sp.r_sequence[nu - 1];
    const double floor = c.c4 / (2.0 * static_cast<double>(sp.m + static_cast<Index>(nu - 1) * c.k0 * c.m0));
    ASSERT_GT(step, floor) << nu;
  }
  EXPECT_GE(sp.r_sequence.back() + sp.levels.back().block.length(), c.R0);
  const SectorSpec s{c.r0, c.R0, c.theta0, c.thetaT};
  for (const auto& p : sp.points) {
    ASSERT_TRUE(s.contains(p.w)) << p.w;
    ASSERT_NEAR(std::abs(p.w), p.r, 1e-12 * p.r);
  }
  // Seam points sit in two members: the top of level nu - 1 and the bottom of level nu.
  std::size_t covered = 0, seams = 0;
  for (const auto& mem : sp.members) covered += mem.count;
  for (const auto& p : sp.points) seams += p.seam ? 1 : 0;
  EXPECT_EQ(covered, sp.points.size() + seams);
  EXPECT_EQ(static_cast<Index>(sp.levels.size()), sp.nu1 + 1);
  EXPECT_GE(sp.r_sequence.back(), c.R0);
  if (sp.r_sequence.size() > 1) EXPECT_LT(sp.r_sequence[sp.r_sequence.size() - 2], c.R0);
}

TEST(SectorPartition, FeasibleLemmaLadder) {
  const auto c = feasible();
  const Index n0 = find_n0(squares(), c, 10000, 20000);
  const auto sp = build_sector_partition(squares(), c, n0);
  expect_structure(sp);
  const auto rep = check_partition_lemmas(sp);
  for (const char* id : {"3.1", "3.2", "3.3", "3.4", "3.5", "3.6", "3.7"}) {
    const LemmaCheck* chk = rep.find(id);
    ASSERT_NE(chk, nullptr) << id;
    EXPECT_TRUE(chk->passed) << id << ": " << chk->detail;
    EXPECT_GT(chk->checked, 0u) << id;
  }
  EXPECT_TRUE(rep.all_passed());
}

TEST(SectorPartition, RadialPlanAgreesWithBuild) {
  const auto c = feasible();
  const auto sp = build_sector_partition(squares(), c, 66);
  const auto plan = plan_radii(squares(), c, 66, 1000);
  EXPECT_TRUE(plan.terminated);
  ASSERT_EQ(plan.r_sequence.size(), sp.r_sequence.size());
  for (std::size_t i = 0; i < plan.r_sequence.size(); ++i) EXPECT_EQ(plan.r_sequence[i], sp.r_sequence[i]);
  EXPECT_EQ(plan.nu1, sp.nu1);
}

TEST(SectorPartition, EstimateCloseToBuild) {
  const auto c = feasible();
  const auto sp = build_sector_partition(squares(), c, 66);
  const auto est = estimate_sector_partition(squares(), c, 66, 1000);
  EXPECT_TRUE(est.radial_terminated);
  EXPECT_EQ(est.levels, sp.nu1);
  const double n = static_cast<double>(sp.points.size());
  EXPECT_LT(std::abs(est.points - n), 0.25 * n);
}

TEST(SectorPartition, NonTerminationWhenLevelsRunOut) {
  // Radial growth per level is about c4 / (m + nu k0 m0), so reach is logarithmic in the level count.
  const auto c = ConstantsBundle::derive({0.5, 2.0, 0.0, 0.25}, 1.125, 113.0, 0.03, 0.9);
  const auto plan = plan_radii(squares(), c, 3000, 200);
  EXPECT_FALSE(plan.terminated);
  try {
    build_sector_partition(squares(), c, 3000, BuildLimits{2'000'000, 2'000'000, 200, 2'000'000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NonTermination || e.kind() == ErrorKind::OutOfBudget) << e.what();
  }
}

TEST(SectorPartition, PointBudget) {
  const auto c = feasible();
  try {
    build_sector_partition(squares(), c, 66, BuildLimits{100, 2'000'000, 20'000, 2'000'000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfBudget);
  }
}

class SectorSweep : public ::testing::TestWithParam<std::tuple<SectorSpec, Index>> {};

TEST_P(SectorSweep, StructuralInvariants) {
  const auto [s, m] = GetParam();
  const auto c = feasible(s);
  const auto sp = build_sector_partition(squares(), c, m);
  expect_structure(sp);
  const auto rep = check_partition_lemmas(sp);
  for (const char* id : {"3.2", "3.3", "3.4", "3.5", "3.6", "3.7"}) {
    const LemmaCheck* chk = rep.find(id);
    ASSERT_NE(chk, nullptr);
    EXPECT_TRUE(chk->passed) << id << ": " << chk->detail;
  }
}

INSTANTIATE_TEST_SUITE_P(Sectors, SectorSweep,
                         ::testing::Values(std::make_tuple(SectorSpec{0.99, 1.01, 0.0, 0.25}, Index{66}),
                                           std::make_tuple(SectorSpec{0.995, 1.005, 0.0, 0.01}, Index{200}),
                                           std::make_tuple(SectorSpec{0.995, 1.005, 0.5, 0.6}, Index{80}),
                                           std::make_tuple(SectorSpec{0.99, 1.01, 0.75, 0.77}, Index{120}),
                                           std::make_tuple(SectorSpec{0.999, 1.001, 0.3, 0.31}, Index{70})),
                         [](const auto& info) { return "case" + std::to_string(info.index); });

}  // namespace
}  // namespace hcv
