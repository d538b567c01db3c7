// Growth inequalities recomputed term by term from their definitions and compared with the library.
#include <cmath>
#include <optional>

#include <gtest/gtest.h>

#include "hcv/examples.hpp"
#include "hcv/properties.hpp"
#include "hcv/synthesis.hpp"

namespace hcv {
namespace {

struct Raw {
  double lhs;
  double rhs;
  bool upper;  // lhs < rhs instead of lhs > rhs
};

Raw oracle(const ComplexSequence& s, const ConstantsBundle& c, Index n, int which) {
  auto L = [&](Index k) { return std::abs(s.eval(k)); };
  const double nd = static_cast<double>(n);
  switch (which) {
    case 1: {
      double sum = 0.0;
      for (Index k = 0; k <= c.m0 - 1; ++k) sum += 1.0 / L(n + k);
      return {L(n) * sum, c.R0 / c.r0 * c.c1, false};
    }
    case 2:
      return {L(n + 1) - L(n), 4.0 * c.c0 / c.r0, false};
    case 3:
      return {L(n), 4.0 * c.c0 / c.r0, false};
    case 4: {
      double sum = 0.0;
      for (Index i = 1; i <= c.k0; ++i) sum += 1.0 / L(n + i * c.m0 - 1);
      return {L(n) * sum, 2.0 * c.c0 / c.c2, false};
    }
    case 5:
      return {nd * (L(n + 1) / L(n) - 1.0), 2.0 * c.c3, false};
    case 6:
      return {nd / (nd + static_cast<double>(c.m0 * c.k0)), 0.5, false};
    case 7:
      return {nd / L(n) * 2.0 * c.c0, c.c4, true};
    default:
      return {nd / L(n), c.c4 / (2.0 * c.c2 * static_cast<double>(c.k0)), true};
  }
}

// nullopt when lhs and rhs are too close to call in floating point.
std::optional<bool> clear_verdict(const Raw& r) {
  if (std::abs(r.lhs - r.rhs) <= 1e-8 * std::abs(r.rhs)) return std::nullopt;
  return r.upper ? r.lhs < r.rhs : r.lhs > r.rhs;
}

void compare(const ComplexSequence& s, const ConstantsBundle& c, const std::vector<Index>& ns) {
  std::size_t decided = 0;
  for (Index n : ns) {
    for (int w = 1; w <= 8; ++w) {
      const Property p = kAllProperties[static_cast<std::size_t>(w - 1)];
      const Raw r = oracle(s, c, n, w);
      const auto v = evaluate_property(s, c, n, p);
      const auto expect = clear_verdict(r);
      if (!expect) continue;
      ++decided;
      ASSERT_EQ(v.holds, *expect) << s.label() << " n=" << n << " " << to_string(p) << " lhs=" << r.lhs
                                  << " rhs=" << r.rhs;
      ASSERT_EQ(check_property(s, c, n, p), *expect);
    }
  }
  EXPECT_GT(decided, ns.size() * 6);
}

const std::vector<Index> kSample = {1, 2, 3, 5, 10, 50, 65, 66, 67, 100, 151, 500, 1234, 10'000, 99'999};

TEST(PropertiesOracle, IdentifiersInOrder) {
  for (int w = 1; w <= 8; ++w) {
    EXPECT_EQ(to_string(kAllProperties[static_cast<std::size_t>(w - 1)]), "(2." + std::to_string(w) + ")");
  }
}

TEST(PropertiesOracle, FeasibleBundle) {
  const auto c = ConstantsBundle::derive({0.99, 1.01, 0.0, 0.25}, 2.001, 2.001, 0.999, 0.95);
  for (const auto& s : {ComplexSequence::polynomial({0.0, 0.0, 1.0}), ComplexSequence::polynomial({0.0, 3.0}),
                        ComplexSequence::exp_power(0.5), ComplexSequence::log_form(40.0, 1.0, 1.0)}) {
    compare(s, c, kSample);
  }
}

TEST(PropertiesOracle, SynthesisBundle) {
  const auto c = synthesis_constants({0.5, 2.0, 0.0, 0.25}, 1.0, 0.5, 0.2);
  for (const auto& s : {ComplexSequence::polynomial({0.0, 0.0, 1.0}), ComplexSequence::polynomial({0.0, 0.0, 0.0, 1.0}),
                        make_example(ExampleClass::Class2), ComplexSequence::exp_power(0.5)}) {
    compare(s, c, kSample);
  }
}

TEST(PropertiesOracle, FirstIndexOfSearch) {
  // Linear scan for the smallest n0 after which every property holds up to the check horizon.
  const auto s = ComplexSequence::polynomial({0.0, 0.0, 1.0});
  const auto c = ConstantsBundle::derive({0.99, 1.01, 0.0, 0.25}, 2.001, 2.001, 0.999, 0.95);
  const Index N = 3000;
  Index last_bad = 0;
  for (Index n = 1; n <= N; ++n) {
    for (int w = 1; w <= 8; ++w) {
      const Raw r = oracle(s, c, n, w);
      const bool ok = r.upper ? r.lhs < r.rhs - 1e-9 * std::abs(r.rhs) : r.lhs > r.rhs + 1e-9 * std::abs(r.rhs);
      if (!ok) last_bad = n;
    }
  }
  const auto found = search_n0(s, c, N / 2, N);
  ASSERT_TRUE(found.n0.has_value());
  EXPECT_EQ(*found.n0, last_bad + 1);
}

}  // namespace
}  // namespace hcv
