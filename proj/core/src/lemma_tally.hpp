#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "hcv/lemmas.hpp"

namespace hcv::detail {

class Tally {
 public:
  Tally(LemmaCheck& check, double margin) : c_(check), margin_(margin) {
    c_.worst_margin = std::numeric_limits<double>::infinity();
  }

  // Records lhs > rhs (strict, with relative margin).
  bool greater(double lhs, double rhs, const std::string& where) {
    return record(lhs - rhs, rhs, lhs > rhs + margin_ * std::abs(rhs), where);
  }
  bool less(double lhs, double rhs, const std::string& where) {
    return record(rhs - lhs, rhs, lhs < rhs - margin_ * std::abs(rhs), where);
  }
  // Exact and boolean checks only lower worst_margin when they fail.
  bool equal(double lhs, double rhs, const std::string& where) {
    return record(lhs == rhs ? kNeutral : -std::abs(lhs - rhs), rhs, lhs == rhs, where);
  }
  bool holds(bool ok, const std::string& where) { return record(ok ? kNeutral : -1.0, 1.0, ok, where); }

  ~Tally() { c_.passed = c_.violations == 0; }

 private:
  static constexpr double kNeutral = std::numeric_limits<double>::infinity();

  bool record(double slack, double rhs, bool ok, const std::string& where) {
    ++c_.checked;
    const double rel = rhs != 0.0 ? slack / std::abs(rhs) : slack;
    if (rel < c_.worst_margin) c_.worst_margin = rel;
    if (!ok) {
      if (c_.violations == 0) c_.detail = where;
      ++c_.violations;
    }
    return ok;
  }

  LemmaCheck& c_;
  double margin_;
};

}  // namespace hcv::detail
