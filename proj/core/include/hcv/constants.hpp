#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/sequence.hpp"

namespace hcv {

// S = { r e^{2 pi i t} : r in [r0, R0], t in [theta0, thetaT] }.
struct SectorSpec {
  double r0 = 0.5;
  double R0 = 2.0;
  double theta0 = 0.0;
  double thetaT = 0.25;

  // DomainError unless 0 < r0 < 1 < R0 and 0 <= theta0 < thetaT <= 1.
  void validate() const;
  bool contains(Complex a, double tol = kBoundaryTol) const;

  // S_n^k: r in [1/n, n], t in [k/4, (k+1)/4]; n >= 2, k in {0, 1, 2, 3}.
  static SectorSpec from_index(int n, int k);
};

Index m0_formula(double R0, double c1, double r0);
Index k0_formula(double c0, double c2);

struct ConstantsBundle {
  double r0 = 0.0;
  double R0 = 0.0;
  double theta0 = 0.0;
  double thetaT = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  Index m0 = 0;
  Index k0 = 0;
  std::optional<Index> n0;

  // Fills c4 = r0 c3 / 2, m0 and k0 from their defining formulas.
  static ConstantsBundle derive(const SectorSpec& s, double c0, double c1, double c2, double c3);

  SectorSpec sector() const { return {r0, R0, theta0, thetaT}; }
  double theta_range() const { return thetaT - theta0; }

  // Hard invariants: sector bounds, 0 < c2 < 1, c3 > 0, c4 = r0 c3 / 2 and the m0, k0 formulas.
  std::vector<std::string> violations() const;
  // Soft conditions, e.g. c0 > 2 and c1 > 2, which the synthesis constants need not meet.
  std::vector<std::string> warnings() const;
};

struct C3Check {
  bool ok = false;
  double two_c3 = 0.0;
  double liminf_estimate = 0.0;
  Index horizon = 0;
};

// 2 c3 < liminf n(|lambda_{n+1}/lambda_n| - 1), checked against the windowed estimate.
C3Check check_c3(const ConstantsBundle& c, const ComplexSequence& seq, Index horizon);

nlohmann::json to_json(const ConstantsBundle& c);
ConstantsBundle constants_from_json(const nlohmann::json& j);

}  // namespace hcv
