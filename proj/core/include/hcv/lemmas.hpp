#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hcv {

struct LemmaCheck {
  std::string id;
  std::string statement;
  bool passed = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  // Smallest relative slack (lhs - rhs) / |rhs| over the checked inequalities; +inf when only
  // exact or boolean checks ran and none failed.
  double worst_margin = 0.0;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;

  bool all_passed() const;
  const LemmaCheck* find(const std::string& id) const;
};

nlohmann::json to_json(const LemmaReport& r);

}  // namespace hcv
