#include "hcv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

SequenceAnalysis analyze(const ComplexSequence& seq, Index horizon) {
  if (horizon < 4) raise(ErrorKind::DomainError, "analyze needs a horizon N >= 4");
  SequenceAnalysis a;
  a.horizon = horizon;
  a.tail_begin = (horizon + 1) / 2;
  a.ratio_sup_tail = 0.0;
  a.ratio_inf_tail = std::numeric_limits<double>::infinity();
  a.gap_min_tail = std::numeric_limits<double>::infinity();
  a.liminf_scaled_ratio = std::numeric_limits<double>::infinity();

  for (Index n = a.tail_begin; n <= horizon; ++n) {
    const double m1 = seq.modulus(n);
    const double m2 = seq.modulus(n + 1);
    double ratio = 0.0;
    double excess = 0.0;  // |lambda_{n+1}/lambda_n| - 1
    double gap = 0.0;
    if (std::isfinite(m1) && std::isfinite(m2)) {
      gap = m2 - m1;
      excess = gap / m1;
      ratio = m2 / m1;
    } else {
      const double dl = seq.log_modulus(n + 1) - seq.log_modulus(n);
      excess = std::expm1(dl);
      ratio = std::exp(dl);
      gap = excess > 0 ? std::numeric_limits<double>::infinity() : (excess < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
    }
    a.ratio_sup_tail = std::max(a.ratio_sup_tail, ratio);
    a.ratio_inf_tail = std::min(a.ratio_inf_tail, ratio);
    a.gap_min_tail = std::min(a.gap_min_tail, gap);
    a.liminf_scaled_ratio = std::min(a.liminf_scaled_ratio, static_cast<double>(n) * excess);
  }
  a.index_estimate = a.ratio_sup_tail;
  return a;
}

nlohmann::json to_json(const SequenceAnalysis& a) {
  return {
      {"horizon", a.horizon},
      {"tail_begin", a.tail_begin},
      {"ratio_sup_tail", real_to_json(a.ratio_sup_tail)},
      {"ratio_inf_tail", real_to_json(a.ratio_inf_tail)},
      {"gap_min_tail", real_to_json(a.gap_min_tail)},
      {"index_estimate", real_to_json(a.index_estimate)},
      {"liminf_scaled_ratio", real_to_json(a.liminf_scaled_ratio)},
      {"note", "evidence up to horizon N; windowed surrogate, not a limit"},
  };
}

}  // namespace hcv
