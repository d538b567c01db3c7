#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hcv/constants.hpp"
#include "hcv/sequence.hpp"

namespace hcv {

// The eight growth inequalities, numbered 1..8 after their labels (2.1)..(2.8).
enum class Property { P21 = 1, P22, P23, P24, P25, P26, P27, P28 };

inline constexpr Property kAllProperties[] = {Property::P21, Property::P22, Property::P23, Property::P24,
                                              Property::P25, Property::P26, Property::P27, Property::P28};

std::string to_string(Property p);
Property property_from_string(const std::string& s);

struct PropertyValue {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

// One inequality at index n, strictness enforced as lhs > rhs + margin |rhs|
// (or lhs < rhs - margin |rhs| for the upper bounds (2.7), (2.8)).
PropertyValue evaluate_property(const ComplexSequence& seq, const ConstantsBundle& c, Index n, Property which,
                                double margin = kStrictMargin);
bool check_property(const ComplexSequence& seq, const ConstantsBundle& c, Index n, Property which,
                    double margin = kStrictMargin);

struct N0Search {
  std::optional<Index> n0;
  Index n_max = 0;
  Index n_check = 0;
  bool empty_scan = false;
  // Largest index in [1, n_check] where some property fails, and the lowest-numbered one failing there.
  std::optional<Property> violated;
  Index violation_index = 0;

  std::string describe() const;
};

// Scans down from n_check; never throws for a missing n0.
N0Search search_n0(const ComplexSequence& seq, const ConstantsBundle& c, Index n_max, Index n_check,
                   double margin = kStrictMargin);

// Smallest n <= n_max with all eight properties on [n, n_check]; raises NotFound otherwise.
Index find_n0(const ComplexSequence& seq, const ConstantsBundle& c, Index n_max, Index n_check,
              double margin = kStrictMargin);

nlohmann::json to_json(const N0Search& s);

}  // namespace hcv
