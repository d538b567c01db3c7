#include "hcv/subsequence.hpp"

#include <cmath>
#include <string>

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {
namespace {

void require_positive(double M1, double M2, Index count) {
  if (!(M1 > 0.0) || !(M2 > 0.0)) raise(ErrorKind::DomainError, "M1 and M2 must be positive");
  if (count < 1) raise(ErrorKind::DomainError, "count must be positive");
}

// Streams the three nested subsequences, pulling original terms one at a time.
class Extractor {
 public:
  Extractor(const ComplexSequence& seq, double M1, double M2, Index budget, Index start)
      : seq_(seq), M1_(M1), M2_(M2), budget_(budget), next_(start) {}

  SubsequenceResult run(Index count) {
    SubsequenceResult r;
    r.M1 = M1_;
    r.M2 = M2_;
    while (static_cast<Index>(r.indices.size()) < count) {
      Candidate k = next_step2();
      const Index step3 = static_cast<Index>(r.indices.size());
      if (step3 > 0) {
        // mu_{step3 + 1} must satisfy |mu_{n+1}| >= |mu_n| (1 + M2 / n), n = step3.
        const double need = mu_last_ * (1.0 + M2_ / static_cast<double>(step3));
        while (!(k.modulus >= need)) k = next_step2();
      }
      mu_last_ = k.modulus;
      r.indices.push_back(k.index);
      r.values.push_back(seq_.eval(k.index));
      r.trace.push_back({k.step1, k.step2, step3 + 1});
    }
    r.indices_read = next_ - 1;
    return r;
  }

 private:
  struct Candidate {
    Index index = 0;
    double modulus = 0.0;
    Index step1 = 0;
    Index step2 = 0;
  };

  Candidate next_raw() {
    if (next_ > budget_) {
      raise(ErrorKind::OutOfBudget, "subsequence extraction exhausted the index budget " + std::to_string(budget_));
    }
    const Index n = next_++;
    return {n, seq_.modulus(n), 0, 0};
  }

  Candidate next_step1() {
    Candidate c = next_raw();
    if (step1_count_ > 0) {
      while (!(c.modulus > step1_last_)) c = next_raw();
    }
    step1_last_ = c.modulus;
    c.step1 = ++step1_count_;
    return c;
  }

  Candidate next_step2() {
    Candidate c = next_step1();
    if (step2_count_ > 0) {
      while (!(c.modulus > step2_last_ + M1_)) c = next_step1();
    }
    step2_last_ = c.modulus;
    c.step2 = ++step2_count_;
    return c;
  }

  const ComplexSequence& seq_;
  double M1_;
  double M2_;
  Index budget_;
  Index next_;
  Index step1_count_ = 0;
  Index step2_count_ = 0;
  double step1_last_ = 0.0;
  double step2_last_ = 0.0;
  double mu_last_ = 0.0;
};

}  // namespace

SubsequenceResult extract_lemma71(const ComplexSequence& seq, double M1, double M2, Index count, Index budget) {
  require_positive(M1, M2, count);
  return Extractor(seq, M1, M2, budget, 1).run(count);
}

SubsequenceResult extract_lemma72(const ComplexSequence& seq, double M1, double M2, double eps, Index count,
                                  Index budget) {
  require_positive(M1, M2, count);
  if (!(eps > 0.0)) raise(ErrorKind::DomainError, "eps must be positive");
  Index start = 1;
  while (true) {
    if (start > budget) raise(ErrorKind::OutOfBudget, "no term with |lambda| > M1 within the index budget");
    if (seq.modulus(start) > M1) break;
    ++start;
  }
  SubsequenceResult r = Extractor(seq, M1, M2, budget, start).run(count);
  r.eps = eps;
  double sup = 0.0;
  const std::size_t n = r.values.size();
  // Tail window over the produced terms, matching the analysis convention.
  for (std::size_t i = n / 2; i + 1 < n; ++i) sup = std::max(sup, std::abs(r.values[i + 1]) / std::abs(r.values[i]));
  r.ratio_sup = sup;
  r.ratio_ceiling_ok = n < 2 || sup <= 1.0 + eps;
  return r;
}

std::vector<std::string> check_subsequence_invariants(const SubsequenceResult& r) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < r.values.size(); ++i) {
    const double a = std::abs(r.values[i]);
    const double b = std::abs(r.values[i + 1]);
    if (!(r.indices[i + 1] > r.indices[i])) out.push_back("indices not increasing at " + std::to_string(i + 1));
    if (!(b - a > r.M1)) out.push_back("gap <= M1 at position " + std::to_string(i + 1));
    if (!(b >= a * (1.0 + r.M2 / static_cast<double>(i + 1)))) {
      out.push_back("growth rule fails at position " + std::to_string(i + 1));
    }
  }
  return out;
}

Lemma73Report check_lemma73(const ComplexSequence& mu, const std::array<double, 5>& sigma, Index m0, Index k0,
                            Index window, double margin) {
  Lemma73Report rep;
  rep.window = window;
  rep.precondition_ok = m0 >= static_cast<Index>(std::floor(sigma[0])) + 1 &&
                        k0 >= static_cast<Index>(std::floor(sigma[2])) + 1;
  auto gt = [margin](double lhs, double rhs) { return lhs > rhs + margin * std::abs(rhs); };
  auto lt = [margin](double lhs, double rhs) { return lhs < rhs - margin * std::abs(rhs); };
  auto weighted = [&](Index n, Index first, Index stride, Index count) {
    const double lb = mu.log_modulus(n);
    const double base = mu.modulus(n);
    double s = 0.0;
    for (Index i = 0; i < count; ++i) {
      const Index idx = first + i * stride;
      const double m = mu.modulus(idx);
      s += (std::isfinite(base) && std::isfinite(m)) ? base / m : std::exp(lb - mu.log_modulus(idx));
    }
    return s;
  };
  auto record = [&](int which, bool ok, Index n) {
    if (!ok && rep.holds[which]) {
      rep.holds[which] = false;
      rep.first_failure[which] = n;
    }
  };
  for (Index n = 1; n <= window; ++n) {
    const double dn = static_cast<double>(n);
    const double a = mu.modulus(n);
    const double b = mu.modulus(n + 1);
    const bool finite = std::isfinite(a) && std::isfinite(b);
    const double gap = finite ? b - a : HUGE_VAL;
    const double excess = finite ? (b - a) / a : std::expm1(mu.log_modulus(n + 1) - mu.log_modulus(n));
    record(0, gt(weighted(n, n, 1, m0), sigma[0]), n);
    record(1, gt(gap, sigma[1]), n);
    record(2, gt(weighted(n, n + m0 - 1, m0, k0), sigma[2]), n);
    record(3, gt(dn * excess, sigma[3]), n);
    record(4, lt(dn / a, sigma[4]), n);
  }
  return rep;
}

nlohmann::json to_json(const SubsequenceResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : r.trace) trace.push_back({t.step1, t.step2, t.step3});
  nlohmann::json j = {{"indices", r.indices},
                      {"values", complex_list_to_json(r.values)},
                      {"M1", r.M1},
                      {"M2", r.M2},
                      {"trace", trace},
                      {"indices_read", r.indices_read}};
  if (r.eps) j["eps"] = *r.eps;
  if (r.ratio_sup) j["ratio_sup"] = *r.ratio_sup;
  if (r.ratio_ceiling_ok) j["ratio_ceiling_ok"] = *r.ratio_ceiling_ok;
  return j;
}

nlohmann::json to_json(const Lemma73Report& r) {
  nlohmann::json props = nlohmann::json::array();
  for (int i = 0; i < 5; ++i) {
    props.push_back({{"property", i + 1}, {"holds", r.holds[i]}, {"first_failure", r.first_failure[i]}});
  }
  return {{"window", r.window}, {"precondition_ok", r.precondition_ok}, {"properties", props}, {"all", r.all()}};
}

}  // namespace hcv
