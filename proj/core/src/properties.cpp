#include "hcv/properties.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hcv/error.hpp"

namespace hcv {

std::string to_string(Property p) {
  return "(2." + std::to_string(static_cast<int>(p)) + ")";
}

Property property_from_string(const std::string& s) {
  for (Property p : kAllProperties) {
    const std::string tag = std::to_string(static_cast<int>(p));
    if (s == to_string(p) || s == "2." + tag || s == "P2" + tag || s == "p2" + tag) return p;
  }
  raise(ErrorKind::ConfigError, "unknown property \"" + s + "\"");
}

namespace {

struct SeqAccess {
  const ComplexSequence& seq;
  double mod(Index n) const { return seq.modulus(n); }
  double logmod(Index n) const {
    const double m = seq.modulus(n);
    return std::isfinite(m) ? std::log(m) : seq.log_modulus(n);
  }
};

struct TableAccess {
  Index lo = 1;
  std::vector<double> mods;
  std::vector<double> logs;
  double mod(Index n) const { return mods[static_cast<std::size_t>(n - lo)]; }
  double logmod(Index n) const { return logs[static_cast<std::size_t>(n - lo)]; }
};

bool greater(double lhs, double rhs, double margin) { return lhs > rhs + margin * std::abs(rhs); }
bool less(double lhs, double rhs, double margin) { return lhs < rhs - margin * std::abs(rhs); }

// |lambda_n| * sum_i 1 / |lambda_{first + i*stride}|, i = 0..count-1.
template <class A>
double weighted_reciprocal_sum(const A& a, Index n, Index first, Index stride, Index count) {
  const double base = a.mod(n);
  bool linear = std::isfinite(base);
  if (linear) {
    double s = 0.0;
    for (Index i = 0; i < count; ++i) {
      const double m = a.mod(first + i * stride);
      if (!std::isfinite(m)) {
        linear = false;
        break;
      }
      s += 1.0 / m;
    }
    if (linear) return base * s;
  }
  const double lb = a.logmod(n);
  double s = 0.0;
  for (Index i = 0; i < count; ++i) s += std::exp(lb - a.logmod(first + i * stride));
  return s;
}

template <class A>
PropertyValue evaluate(const A& a, const ConstantsBundle& c, Index n, Property which, double margin) {
  PropertyValue v;
  const double dn = static_cast<double>(n);
  switch (which) {
    case Property::P21:
      v.lhs = weighted_reciprocal_sum(a, n, n, 1, c.m0);
      v.rhs = c.R0 / c.r0 * c.c1;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    case Property::P22: {
      const double m1 = a.mod(n);
      const double m2 = a.mod(n + 1);
      if (std::isfinite(m1) && std::isfinite(m2)) {
        v.lhs = m2 - m1;
      } else {
        const double e = std::expm1(a.logmod(n + 1) - a.logmod(n));
        v.lhs = e == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), e);
      }
      v.rhs = 4.0 * c.c0 / c.r0;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    }
    case Property::P23:
      v.lhs = a.mod(n);
      v.rhs = 4.0 * c.c0 / c.r0;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    case Property::P24:
      v.lhs = weighted_reciprocal_sum(a, n, n + c.m0 - 1, c.m0, c.k0);
      v.rhs = 2.0 * c.c0 / c.c2;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    case Property::P25: {
      const double m1 = a.mod(n);
      const double m2 = a.mod(n + 1);
      const double excess = (std::isfinite(m1) && std::isfinite(m2)) ? (m2 - m1) / m1
                                                                      : std::expm1(a.logmod(n + 1) - a.logmod(n));
      v.lhs = dn * excess;
      v.rhs = 2.0 * c.c3;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    }
    case Property::P26:
      v.lhs = dn / (dn + static_cast<double>(c.m0 * c.k0));
      v.rhs = 0.5;
      v.holds = greater(v.lhs, v.rhs, margin);
      break;
    case Property::P27:
      v.lhs = dn / a.mod(n) * 2.0 * c.c0;
      v.rhs = c.c4;
      v.holds = less(v.lhs, v.rhs, margin);
      break;
    case Property::P28:
      v.lhs = dn / a.mod(n);
      v.rhs = c.c4 / (2.0 * c.c2 * static_cast<double>(c.k0));
      v.holds = less(v.lhs, v.rhs, margin);
      break;
  }
  return v;
}

void require_populated(const ConstantsBundle& c) {
  if (c.m0 < 1 || c.k0 < 1 || !(c.r0 > 0.0) || !(c.c2 > 0.0)) {
    raise(ErrorKind::DomainError, "property checks need populated constants (m0, k0 >= 1, r0, c2 > 0)");
  }
}

// Highest index read by any property at n.
Index reach(const ConstantsBundle& c) { return std::max<Index>(c.m0 - 1, c.k0 * c.m0 - 1); }

constexpr Index kMaxTable = 200'000'000;

}  // namespace

PropertyValue evaluate_property(const ComplexSequence& seq, const ConstantsBundle& c, Index n, Property which,
                                double margin) {
  require_populated(c);
  if (n < 1) raise(ErrorKind::DomainError, "property index must be >= 1");
  return evaluate(SeqAccess{seq}, c, n, which, margin);
}

bool check_property(const ComplexSequence& seq, const ConstantsBundle& c, Index n, Property which, double margin) {
  return evaluate_property(seq, c, n, which, margin).holds;
}

std::string N0Search::describe() const {
  if (empty_scan) return "empty scan (N_max = 0)";
  if (n0) {
    return "n0 = " + std::to_string(*n0) + ", all eight properties verified on [n0, " + std::to_string(n_check) +
           "]";
  }
  return "no n0 <= " + std::to_string(n_max) + ": " + to_string(*violated) + " fails at n = " +
         std::to_string(violation_index) + " (verification horizon " + std::to_string(n_check) + ")";
}

N0Search search_n0(const ComplexSequence& seq, const ConstantsBundle& c, Index n_max, Index n_check, double margin) {
  require_populated(c);
  N0Search out;
  out.n_max = n_max;
  out.n_check = n_check;
  if (n_max <= 0) {
    out.empty_scan = true;
    return out;
  }
  if (n_check < n_max) raise(ErrorKind::DomainError, "find_n0 needs N_check >= N_max");

  const Index hi = n_check + reach(c) + 1;
  if (hi > kMaxTable) raise(ErrorKind::OutOfBudget, "find_n0 horizon needs " + std::to_string(hi) + " terms");

  TableAccess table;
  table.lo = 1;
  table.mods.assign(static_cast<std::size_t>(hi), 0.0);
  table.logs.assign(static_cast<std::size_t>(hi), 0.0);
  // Filled top-down on demand so a violation near n_check stops the work early.
  Index filled_from = hi + 1;
  auto fill_down_to = [&](Index lo) {
    for (Index i = filled_from - 1; i >= lo; --i) {
      const double m = seq.modulus(i);
      table.mods[static_cast<std::size_t>(i - 1)] = m;
      table.logs[static_cast<std::size_t>(i - 1)] = std::isfinite(m) ? std::log(m) : seq.log_modulus(i);
    }
    filled_from = std::min(filled_from, lo);
  };

  for (Index n = n_check; n >= 1; --n) {
    fill_down_to(n);
    for (Property p : kAllProperties) {
      if (!evaluate(table, c, n, p, margin).holds) {
        out.violated = p;
        out.violation_index = n;
        if (n + 1 <= n_max) out.n0 = n + 1;
        return out;
      }
    }
  }
  out.n0 = 1;
  return out;
}

Index find_n0(const ComplexSequence& seq, const ConstantsBundle& c, Index n_max, Index n_check, double margin) {
  const N0Search s = search_n0(seq, c, n_max, n_check, margin);
  if (!s.n0) raise(ErrorKind::NotFound, s.describe());
  return *s.n0;
}

nlohmann::json to_json(const N0Search& s) {
  nlohmann::json j = {{"n_max", s.n_max}, {"n_check", s.n_check}, {"empty_scan", s.empty_scan},
                      {"summary", s.describe()}};
  j["n0"] = s.n0 ? nlohmann::json(*s.n0) : nlohmann::json(nullptr);
  if (s.violated) {
    j["violated_property"] = to_string(*s.violated);
    j["violation_index"] = s.violation_index;
  }
  return j;
}

}  // namespace hcv
