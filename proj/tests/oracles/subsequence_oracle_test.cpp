// Three-pass extraction over a materialized prefix compared with the streaming extractor.
#include <cmath>
#include <utility>

#include <gtest/gtest.h>

#include "hcv/examples.hpp"
#include "hcv/subsequence.hpp"

namespace hcv {
namespace {

std::vector<Index> three_pass(const ComplexSequence& s, double M1, double M2, Index N, std::size_t count) {
  std::vector<double> mod(static_cast<std::size_t>(N) + 1);
  for (Index n = 1; n <= N; ++n) mod[static_cast<std::size_t>(n)] = std::abs(s.eval(n));
  // Step 1: record-breaking moduli.
  std::vector<Index> theta = {1};
  for (Index n = 2; n <= N; ++n) {
    if (mod[static_cast<std::size_t>(n)] > mod[static_cast<std::size_t>(theta.back())]) theta.push_back(n);
  }
  // Step 2: gaps above M1.
  std::vector<Index> k = {theta.front()};
  for (Index t : theta) {
    if (mod[static_cast<std::size_t>(t)] > mod[static_cast<std::size_t>(k.back())] + M1) k.push_back(t);
  }
  // Step 3: |mu_{n+1}| >= |mu_n| (1 + M2 / n).
  std::vector<Index> mu = {k.front()};
  for (Index t : k) {
    if (mu.size() == count) break;
    const double need = mod[static_cast<std::size_t>(mu.back())] * (1.0 + M2 / static_cast<double>(mu.size()));
    if (t > mu.back() && mod[static_cast<std::size_t>(t)] >= need) mu.push_back(t);
  }
  return mu;
}

TEST(SubsequenceOracle, MatchesThreePass) {
  // Prefix lengths stay inside double range (Class 3 holds 2^(n/2) terms).
  const std::vector<std::pair<ComplexSequence, Index>> seqs = {
      {ComplexSequence::polynomial({0.0, 1.0}), 200'000}, {ComplexSequence::polynomial({0.0, 0.0, 1.0}), 200'000},
      {make_example(ExampleClass::Class2), 200'000},      {make_example(ExampleClass::Class3), 2000},
      {ComplexSequence::log_form(1.0, 1.0, 1.0), 200'000}, {ComplexSequence::exp_power(0.5), 200'000}};
  for (const auto& [s, N] : seqs) {
    for (auto [M1, M2] : {std::pair{1.0, 1.0}, std::pair{0.5, 3.0}, std::pair{7.0, 0.25}}) {
      // Slow sequences yield fewer terms within N; compare whatever the prefix gives.
      const auto want = three_pass(s, M1, M2, N, 40);
      ASSERT_GE(want.size(), 10u) << s.label();
      const auto got = extract_lemma71(s, M1, M2, static_cast<Index>(want.size()), N);
      EXPECT_EQ(got.indices, want) << s.label() << " M1=" << M1 << " M2=" << M2;
    }
  }
}

TEST(SubsequenceOracle, HandTrace) {
  // |lambda| = 1, 3, 2, 4, 4, 6, 9, 10, 20, 21, 40 with M1 = 1, M2 = 1:
  // step 1 keeps 1, 3, 4, 6, 9, 10, 20, 21, 40; step 2 keeps 1, 3, 6, 9, 20, 40;
  // step 3 needs x2, x1.5, x1.33, ... and keeps 1, 3, 6, 9, 20.
  const auto s = ComplexSequence::explicit_list({1.0, 3.0, 2.0, 4.0, 4.0, 6.0, 9.0, 10.0, 20.0, 21.0, 40.0});
  const auto r = extract_lemma71(s, 1.0, 1.0, 5, 11);
  EXPECT_EQ(r.indices, (std::vector<Index>{1, 2, 6, 7, 9}));
}

}  // namespace
}  // namespace hcv
