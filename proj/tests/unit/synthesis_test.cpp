#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hcv/error.hpp"
#include "hcv/synthesis.hpp"

namespace hcv {
namespace {

// Explicit-constants configuration small enough to run end to end; hypotheses are not verified.
struct Demo {
  ComplexSequence seq = ComplexSequence::polynomial({0.0, 3.0});
  SectorSpec sector{0.999, 1.001, 0.0, 0.001};
  SynthesisProblem prob;
  SynthesisOptions opt;

  explicit Demo(SectorSpec s = {0.999, 1.001, 0.0, 0.001}) : sector(s) {
    opt.constants = ConstantsBundle::derive(sector, 1.125, 2.0, 0.999, 0.9);
    opt.m = 5;
    opt.sweep.n_r = 11;
    opt.sweep.n_t = 11;
  }
};

TEST(Delta0, Examples) {
  EXPECT_EQ(choose_delta0(Polynomial::constant(3.0), 1.0, 0.1), 0.9);
  EXPECT_DOUBLE_EQ(choose_delta0(Polynomial::identity(), 1.0, 0.1), 0.05);
  const Polynomial sq({0.0, 0.0, 1.0});
  const auto d = choose_delta0_detailed(sq, 2.0, 0.1);
  EXPECT_NEAR(d.delta0, 1.0 / 70.0, 1e-12);
  EXPECT_NEAR(d.max_derivative, 6.0, 1e-12);
  EXPECT_TRUE(d.validated);
  EXPECT_EQ(d.halvings, 0);
  try {
    choose_delta0(sq, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateTarget);
  }
}

TEST(Delta0, ValidatedPairsAreWithinTarget) {
  const Polynomial p({1.0, Complex(0.0, 2.0), 0.0, -1.0});
  const double R1 = 1.5, target = 0.2;
  const double d = choose_delta0(p, R1, target);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const Complex z = std::polar(R1 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const Complex w = z + std::polar(0.999 * d * u(rng), kTwoPi * u(rng));
    ASSERT_LT(std::abs(p(z) - p(w)), target);
  }
}

TEST(SynthesisConstants, StandardSector) {
  const auto c = synthesis_constants({0.5, 2.0, 0.0, 0.25}, 1.0, 0.5, 0.2);
  EXPECT_DOUBLE_EQ(c.c0, 1.5);
  EXPECT_DOUBLE_EQ(c.c1, 12.0 * kPi);
  EXPECT_DOUBLE_EQ(c.c2, 0.125);
  EXPECT_DOUBLE_EQ(c.c4, 0.05);
  EXPECT_EQ(c.m0, 151);
  EXPECT_EQ(c.k0, 25);
  EXPECT_FALSE(c.n0.has_value());
  EXPECT_THROW(synthesis_constants({0.5, 2.0, 0.0, 0.25}, 1.0, 1.0, 0.2), Error);
}

TEST(Problem, Validation) {
  SynthesisProblem p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.fit_tol(), 0.25);
  p.s1 = 4;
  EXPECT_DOUBLE_EQ(p.fit_tol(), 0.125);
  p.k1 = 2;
  EXPECT_THROW(p.validate(), Error);
  p = SynthesisProblem{};
  p.C = ClosedDisk{Complex(0.5, 0.0), 0.6};
  EXPECT_THROW(p.validate(), Error);
  const auto back = problem_from_json(to_json(SynthesisProblem{}));
  EXPECT_EQ(back.s1, 2);
  EXPECT_EQ(back.R1, 1.0);
}

TEST(Targets, PiecewiseAssembly) {
  SynthesisProblem prob;
  prob.g = EntireFunction::builtin(EntireFunction::Kind::Exp);
  const auto fam = family_from_centers({Complex(10.0, 0.0)}, 1.5);
  const auto t = assemble_targets(fam, prob, 16);
  ASSERT_EQ(t.disks(), 2u);
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    const Complex want = t.disk_of[i] == 0 ? std::exp(t.z[i]) : t.z[i] - Complex(10.0, 0.0);
    ASSERT_LT(std::abs(t.h[i] - want), 1e-14);
  }
}

// Linear scan over members: the tallest order-0 height not above |a|, densest on ties,
// then the largest angle not above arg a.
std::pair<double, double> oracle_bracket(const SectorPartition& sp, Complex a) {
  const double r = std::abs(a) * (1.0 + 1e-12);
  double t = std::atan2(a.imag(), a.real()) / kTwoPi;
  if (t < 0.0) t += 1.0;
  t = std::clamp(t, sp.constants.theta0, sp.constants.thetaT);
  const MemberRecord* best = &sp.members.front();
  for (const auto& m : sp.members) {
    if (m.height <= r && (m.height > best->height || (m.height == best->height && m.density > best->density))) {
      best = &m;
    }
  }
  double th = best->theta->thetas.front();
  for (double x : best->theta->thetas) {
    if (x <= t + 1e-12) th = std::max(th, x);
  }
  return {best->height, th};
}

TEST(Anchor, AgreesWithLinearScan) {
  Demo d;
  const auto sp = build_sector_partition(d.seq, *d.opt.constants, 5);
  const AnchorLocator loc(sp);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& c = sp.constants;
  std::vector<Complex> probes = {from_turns(c.R0, c.thetaT), from_turns(c.r0, c.theta0), from_turns(c.R0, c.theta0)};
  for (int i = 0; i < 500; ++i) {
    probes.push_back(from_turns(c.r0 + (c.R0 - c.r0) * u(rng), c.theta0 + (c.thetaT - c.theta0) * u(rng)));
  }
  for (const auto& p : sp.points) probes.push_back(p.w);
  for (Complex a : probes) {
    const Anchor an = loc.locate(a);
    const auto [h, th] = oracle_bracket(sp, a);
    ASSERT_EQ(an.r_lo, h) << a;
    ASSERT_EQ(an.theta_lo, th) << a;
    ASSERT_EQ(sp.points[an.point_index].r, an.r_lo);
    ASSERT_EQ(sp.points[an.point_index].theta, an.theta_lo);
    ASSERT_LE(an.r_lo, an.r * (1.0 + 1e-12));
    ASSERT_LE(an.theta_lo, an.t + 1e-12);
  }
}

TEST(Anchor, OutsideSector) {
  Demo d;
  const auto sp = build_sector_partition(d.seq, *d.opt.constants, 5);
  try {
    locate_anchor(Complex(-1.0, 0.0), sp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideSector);
  }
  EXPECT_THROW(locate_anchor(Complex(0.5, 0.0), sp), Error);
}

TEST(TranslationBound, ZeroAgainstOneFails) {
  SynthesisProblem prob;
  prob.p = Polynomial::constant(1.0);
  const auto b = verify_translation_bound([](Complex) { return Complex{}; }, Complex(1.0), Complex(1.0),
                                          Complex(10.0), prob, 0.5);
  EXPECT_DOUBLE_EQ(b.sup_error, 1.0);
  EXPECT_FALSE(b.pass);
  EXPECT_TRUE(b.anchor_ok);
  EXPECT_TRUE(b.containment_ok);
}

TEST(TranslationBound, ExactShiftPasses) {
  SynthesisProblem prob;
  const Complex a(0.6, 0.8), lambda(7.0, 0.0), w0(0.6, 0.8 - 0.01);
  const auto f = [&](Complex z) { return z - a * lambda; };
  const auto b = verify_translation_bound(f, a, w0, lambda, prob, 0.1);
  EXPECT_LT(b.sup_error, 1e-13);
  EXPECT_TRUE(b.pass);
  EXPECT_NEAR(b.anchor_lhs, 0.07, 1e-12);
  EXPECT_TRUE(b.anchor_ok);
  EXPECT_NEAR(b.containment_max, 1.07, 1e-9);
  EXPECT_TRUE(b.containment_ok);
  EXPECT_FALSE(verify_translation_bound(f, a, w0, lambda, prob, 0.05).anchor_ok);
}

TEST(Synthesize, DemoCompletes) {
  Demo d;
  const auto out = synthesize(d.seq, d.sector, d.prob, d.opt);
  ASSERT_TRUE(out.completed) << out.stage << ": " << out.message;
  EXPECT_EQ(out.stage, "done");
  EXPECT_EQ(out.exit_code(), 0);
  EXPECT_FALSE(out.hypotheses_verified);
  ASSERT_TRUE(out.fit && out.sweep && out.disjoint);
  EXPECT_TRUE(out.disjoint->disjoint);
  EXPECT_TRUE(out.fit->success);
  EXPECT_LT(out.fit->global_sup_error, d.prob.fit_tol());
  EXPECT_EQ(out.sweep->samples.size(), 121u);
  EXPECT_TRUE(out.sweep->passed());
  EXPECT_TRUE(out.sweep->all_within_m1);
  for (const auto& s : out.sweep->samples) ASSERT_LT(s.check.sup_error, d.prob.sweep_tol());
  EXPECT_TRUE(out.g_check_ok);
}

TEST(Synthesize, Deterministic) {
  Demo d;
  const auto a = synthesize(d.seq, d.sector, d.prob, d.opt);
  const auto b = synthesize(d.seq, d.sector, d.prob, d.opt);
  ASSERT_TRUE(a.fit && b.fit);
  EXPECT_EQ(a.fit->coefficients, b.fit->coefficients);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Synthesize, SingleSampleSweep) {
  Demo d;
  d.opt.sweep.n_r = 1;
  d.opt.sweep.n_t = 1;
  const auto out = synthesize(d.seq, d.sector, d.prob, d.opt);
  ASSERT_TRUE(out.sweep);
  ASSERT_EQ(out.sweep->samples.size(), 1u);
  EXPECT_EQ(out.sweep->samples[0].a, from_turns(d.sector.r0, d.sector.theta0));
}

TEST(Synthesize, DegreeCapStopsAtFit) {
  Demo d({0.95, 1.05, 0.0, 0.005});
  d.opt.fit.degree_schedule = {4};
  const auto out = synthesize(d.seq, d.sector, d.prob, d.opt);
  EXPECT_FALSE(out.completed);
  EXPECT_EQ(out.stage, "fit");
  EXPECT_EQ(out.exit_code(), 4);
}

TEST(Synthesize, ExponentialStopsAtFindN0) {
  SynthesisOptions opt;
  opt.n0.n_max = 1000;
  opt.n0.n_check = 2000;
  const auto out =
      synthesize(ComplexSequence::exp_power(1.0), {0.5, 2.0, 0.0, 0.25}, SynthesisProblem{}, opt);
  EXPECT_FALSE(out.completed);
  EXPECT_EQ(out.stage, "find_n0");
  ASSERT_TRUE(out.error.has_value());
  EXPECT_EQ(*out.error, ErrorKind::NotFound);
  EXPECT_NE(out.message.find("(2.1)"), std::string::npos);
  EXPECT_EQ(out.exit_code(), 3);
}

TEST(Synthesize, StopAfterDisks) {
  Demo d;
  d.opt.stop_after = "disks";
  const auto out = synthesize(d.seq, d.sector, d.prob, d.opt);
  EXPECT_FALSE(out.completed);
  EXPECT_FALSE(out.error.has_value());
  EXPECT_TRUE(out.family.has_value());
  EXPECT_FALSE(out.fit.has_value());
}

TEST(Synthesize, ExplicitConstantsChecked) {
  Demo d;
  d.opt.constants->c4 = 10.0;
  const auto out = synthesize(d.seq, d.sector, d.prob, d.opt);
  EXPECT_FALSE(out.completed);
  ASSERT_TRUE(out.error.has_value());
  EXPECT_EQ(*out.error, ErrorKind::DomainError);
}

}  // namespace
}  // namespace hcv
