#include <cmath>
#include <utility>

#include <gtest/gtest.h>

#include "hcv/error.hpp"
#include "hcv/examples.hpp"
#include "hcv/subsequence.hpp"

namespace hcv {
namespace {

std::vector<double> moduli(const SubsequenceResult& r) {
  std::vector<double> out;
  for (const Complex& v : r.values) out.push_back(std::abs(v));
  return out;
}

TEST(Lemma71, LinearGivesOdds) {
  const auto r = extract_lemma71(ComplexSequence::polynomial({0.0, 1.0}), 1.0, 1.0, 4, 1000);
  EXPECT_EQ(moduli(r), (std::vector<double>{1, 3, 5, 7}));
  EXPECT_EQ(r.indices, (std::vector<Index>{1, 3, 5, 7}));
  EXPECT_TRUE(check_subsequence_invariants(r).empty());
  EXPECT_EQ(r.trace.size(), 4u);
}

TEST(Lemma71, PowersOfTwoKeptWhole) {
  const auto r = extract_lemma71(ComplexSequence::power_of(2.0), 1.0, 1.0, 5, 1000);
  EXPECT_EQ(moduli(r), (std::vector<double>{2, 4, 8, 16, 32}));
}

TEST(Lemma71, ZeroBudget) {
  try {
    extract_lemma71(ComplexSequence::polynomial({0.0, 1.0}), 1.0, 1.0, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfBudget);
  }
}

TEST(Lemma71, InvariantsOnSeveralSequences) {
  // Step 3 forces roughly quadratic growth of the moduli, so slow sequences get shorter runs.
  const std::vector<std::pair<ComplexSequence, Index>> seqs = {
      {ComplexSequence::polynomial({0.0, 1.0}), 1000}, {ComplexSequence::polynomial({0.0, 0.0, 1.0}), 1000},
      {make_example(ExampleClass::Class2), 30},        {make_example(ExampleClass::Class3), 400},
      {ComplexSequence::log_form(1.0, 1.0, 1.0), 300}};
  for (const auto& [s, count] : seqs) {
    for (double M1 : {0.5, 3.0}) {
      const auto r = extract_lemma71(s, M1, 2.0, count, 50'000'000);
      ASSERT_EQ(r.indices.size(), static_cast<std::size_t>(count)) << s.label();
      EXPECT_TRUE(check_subsequence_invariants(r).empty()) << s.label();
      for (std::size_t i = 1; i < r.indices.size(); ++i) ASSERT_LT(r.indices[i - 1], r.indices[i]);
    }
  }
}

TEST(Lemma72, FirstTermAboveM1) {
  const auto r = extract_lemma72(ComplexSequence::polynomial({0.0, 1.0}), 10.0, 1.0, 0.5, 1, 1000);
  ASSERT_EQ(r.values.size(), 1u);
  EXPECT_EQ(std::abs(r.values[0]), 11.0);
}

TEST(Lemma72, RatioCeilingRecorded) {
  const auto r = extract_lemma72(ComplexSequence::power_of(2.0), 1.0, 1.0, 1.5, 3, 1000);
  EXPECT_EQ(moduli(r), (std::vector<double>{2, 4, 8}));
  ASSERT_TRUE(r.ratio_sup.has_value());
  EXPECT_DOUBLE_EQ(*r.ratio_sup, 2.0);
  ASSERT_TRUE(r.ratio_ceiling_ok.has_value());
  EXPECT_TRUE(*r.ratio_ceiling_ok);
  EXPECT_THROW(extract_lemma72(ComplexSequence::power_of(2.0), 1.0, 1.0, 1.5, 3, 0), Error);
}

TEST(Lemma73, SquaresSecondProperty) {
  const auto rep = check_lemma73(ComplexSequence::polynomial({0.0, 0.0, 1.0}), {1, 1, 1, 1, 10}, 2, 2, 100);
  EXPECT_TRUE(rep.precondition_ok);
  EXPECT_TRUE(rep.holds[1]);
}

TEST(Lemma73, ExponentialFailsFirst) {
  const auto rep = check_lemma73(ComplexSequence::exp_power(1.0), {2, 1, 1, 1, 1}, 3, 2, 100);
  EXPECT_FALSE(rep.holds[0]);
  EXPECT_EQ(rep.first_failure[0], 1);
}

TEST(Lemma73, EmptyWindowVacuous) {
  const auto rep = check_lemma73(ComplexSequence::exp_power(1.0), {2, 1, 1, 1, 1}, 3, 2, 0);
  EXPECT_TRUE(rep.all());
}

}  // namespace
}  // namespace hcv
