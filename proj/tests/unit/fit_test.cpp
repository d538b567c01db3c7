#include <cmath>

#include <gtest/gtest.h>

#include "hcv/error.hpp"
#include "hcv/fit.hpp"

namespace hcv {
namespace {

TargetSet one_disk(std::function<Complex(Complex)> h, Complex center = {}, double radius = 1.0) {
  return sample_targets({center}, {radius}, [h](std::size_t, Complex z) { return h(z); });
}

TEST(Sampling, Layout) {
  const auto t = sample_targets({Complex{}, Complex(5.0, 0.0)}, {1.0, 0.5},
                                [](std::size_t d, Complex) { return Complex(static_cast<double>(d)); }, 32);
  EXPECT_EQ(t.disks(), 2u);
  EXPECT_EQ(t.boundary_per_disk, 32u);
  EXPECT_EQ(t.interior_per_disk, 9u);
  EXPECT_EQ(t.z.size(), 2u * (32u + 9u));
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    const std::size_t d = t.disk_of[i];
    const double dist = std::abs(t.z[i] - t.centers[d]);
    if (t.on_boundary[i]) {
      EXPECT_NEAR(dist, t.radii[d], 1e-12);
    } else {
      EXPECT_LE(dist, 0.5 * t.radii[d] * (1.0 + 1e-12));
    }
    EXPECT_EQ(t.h[i], Complex(static_cast<double>(d)));
  }
}

TEST(Fit, RecoversPolynomialExactly) {
  const auto h = [](Complex z) { return Complex(1.0, -2.0) + 2.0 * z + Complex(0.0, 3.0) * z * z * z; };
  FitOptions opt;
  opt.degree_schedule = {8};
  const auto f = fit_polynomial(one_disk(h, Complex(0.5, 0.5), 2.0), opt);
  EXPECT_TRUE(f.success);
  EXPECT_LT(f.global_sup_error, 1e-10);
  for (Complex z : {Complex(0.1, 0.2), Complex(-1.0, 1.5), Complex(2.0, 0.0)}) {
    EXPECT_LT(std::abs(f(z) - h(z)), 1e-9);
  }
  const auto mono = f.monomial_coefficients();
  ASSERT_GE(mono.size(), 4u);
  EXPECT_LT(std::abs(mono[0] - Complex(1.0, -2.0)), 1e-9);
  EXPECT_LT(std::abs(mono[1] - Complex(2.0, 0.0)), 1e-9);
  EXPECT_LT(std::abs(mono[2]), 1e-9);
  EXPECT_LT(std::abs(mono[3] - Complex(0.0, 3.0)), 1e-9);
}

TEST(Fit, ExpOnUnitDiskAtModestDegree) {
  FitOptions opt;
  opt.tol = 1e-6;
  const auto f = fit_polynomial(one_disk([](Complex z) { return std::exp(z); }), opt);
  EXPECT_TRUE(f.success);
  EXPECT_LE(f.degree, 25);
  EXPECT_LT(f.global_sup_error, 1e-6);
  EXPECT_TRUE(f.certified);
  ASSERT_EQ(f.certified_sup.size(), opt.certify_factors.size());
  for (double s : f.certified_sup) EXPECT_LE(s, 1.1 * f.global_sup_error + 1e-15);
  ASSERT_FALSE(f.attempts.empty());
  EXPECT_EQ(f.attempts.back().degree, f.degree);
}

TEST(Fit, DegreeCapReported) {
  // Two nearby disks with different constants: no low degree polynomial is within 1e-6 of both.
  const auto t = sample_targets({Complex{}, Complex(2.5, 0.0)}, {1.0, 1.0},
                                [](std::size_t d, Complex) { return Complex(d == 0 ? 0.0 : 1.0); }, 64);
  FitOptions opt;
  opt.tol = 1e-6;
  opt.degree_schedule = {4, 8};
  const auto f = fit_polynomial(t, opt);
  EXPECT_FALSE(f.success);
  EXPECT_EQ(f.attempts.size(), 2u);
  EXPECT_GT(f.global_sup_error, 1e-6);
  EXPECT_FALSE(f.message.empty());
  ASSERT_EQ(f.per_disk_sup_error.size(), 2u);
}

TEST(Fit, MatrixBudget) {
  FitOptions opt;
  opt.degree_schedule = {8};
  opt.max_matrix_entries = 10;
  try {
    fit_polynomial(one_disk([](Complex z) { return z; }), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfBudget);
  }
}

TEST(Fit, Deterministic) {
  const auto t = sample_targets({Complex{}, Complex(3.0, 1.0)}, {1.0, 0.5}, [](std::size_t d, Complex z) {
    return d == 0 ? std::exp(z) : std::sin(z);
  });
  const auto a = fit_polynomial(t);
  const auto b = fit_polynomial(t);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.global_sup_error, b.global_sup_error);
}

TEST(Fit, BoundarySupMatchesReported) {
  const auto t = one_disk([](Complex z) { return std::cos(z); });
  const auto f = fit_polynomial(t);
  const auto sup = boundary_sup(f, t, t.boundary_per_disk);
  ASSERT_EQ(sup.size(), 1u);
  EXPECT_NEAR(sup[0], f.per_disk_sup_error[0], 1e-15 + 1e-9 * sup[0]);
}

}  // namespace
}  // namespace hcv
