#pragma once

#include <array>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/sequence.hpp"

namespace hcv {

struct StepTrace {
  Index step1 = 0;  // position in the strictly increasing subsequence
  Index step2 = 0;  // position in the M1-gap subsequence
  Index step3 = 0;  // position in the final subsequence
};

struct SubsequenceResult {
  std::vector<Index> indices;  // original 1-based indices
  std::vector<Complex> values;
  double M1 = 0.0;
  double M2 = 0.0;
  std::optional<double> eps;
  std::vector<StepTrace> trace;
  // Lemma 7.2 only: sup of consecutive ratios of the output and whether it stays <= 1 + eps.
  std::optional<double> ratio_sup;
  std::optional<bool> ratio_ceiling_ok;
  Index indices_read = 0;
};

// Three-step extraction: strictly increasing moduli, gaps > M1, then growth factor
// |mu_{n+1}| >= |mu_n| (1 + M2/n) taking the smallest admissible position each time.
// budget bounds the original indices read; OutOfBudget if count terms are not reached.
SubsequenceResult extract_lemma71(const ComplexSequence& seq, double M1, double M2, Index count, Index budget);

// As extract_lemma71 but starting from the first term with |lambda| > M1; records the
// windowed ratio ceiling check against 1 + eps.
SubsequenceResult extract_lemma72(const ComplexSequence& seq, double M1, double M2, double eps, Index count,
                                  Index budget);

// Violations of the two stated invariants, empty when both hold.
std::vector<std::string> check_subsequence_invariants(const SubsequenceResult& r);

struct Lemma73Report {
  bool precondition_ok = true;  // m0 >= [sigma1] + 1 and k0 >= [sigma3] + 1
  std::array<bool, 5> holds{true, true, true, true, true};
  std::array<Index, 5> first_failure{0, 0, 0, 0, 0};
  Index window = 0;

  bool all() const { return holds[0] && holds[1] && holds[2] && holds[3] && holds[4]; }
};

// Checks the five inequalities for every n in [1, window] on the given sequence.
Lemma73Report check_lemma73(const ComplexSequence& mu, const std::array<double, 5>& sigma, Index m0, Index k0,
                            Index window, double margin = kStrictMargin);

nlohmann::json to_json(const SubsequenceResult& r);
nlohmann::json to_json(const Lemma73Report& r);

}  // namespace hcv
