#pragma once

#include <nlohmann/json.hpp>

#include "hcv/sequence.hpp"

namespace hcv {

// Tail statistics over n in [ceil(N/2), N]. These are finite-horizon evidence,
// not limits: index_estimate is the windowed sup of |lambda_{n+1} / lambda_n|.
struct SequenceAnalysis {
  Index horizon = 0;
  Index tail_begin = 0;
  double ratio_sup_tail = 0.0;
  double ratio_inf_tail = 0.0;
  double gap_min_tail = 0.0;
  double index_estimate = 0.0;
  double liminf_scaled_ratio = 0.0;
};

SequenceAnalysis analyze(const ComplexSequence& seq, Index horizon);

nlohmann::json to_json(const SequenceAnalysis& a);

}  // namespace hcv
