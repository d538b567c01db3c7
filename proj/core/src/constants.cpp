#include "hcv/constants.hpp"

#include <cmath>
#include <sstream>

#include "hcv/analysis.hpp"
#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

void SectorSpec::validate() const {
  if (!(r0 > 0.0 && r0 < 1.0 && R0 > 1.0 && std::isfinite(R0))) {
    raise(ErrorKind::DomainError, "sector needs 0 < r0 < 1 < R0");
  }
  if (!(theta0 >= 0.0 && theta0 < thetaT && thetaT <= 1.0)) {
    raise(ErrorKind::DomainError, "sector needs 0 <= theta0 < thetaT <= 1");
  }
}

bool SectorSpec::contains(Complex a, double tol) const {
  const double r = std::abs(a);
  if (r < r0 - tol || r > R0 + tol) return false;
  double t = std::arg(a) / kTwoPi;
  if (t < 0.0) t += 1.0;
  // Angle 0 and 1 coincide; accept whichever representative lies in range.
  for (double cand : {t, t + 1.0, t - 1.0}) {
    if (cand >= theta0 - tol && cand <= thetaT + tol) return true;
  }
  return false;
}

SectorSpec SectorSpec::from_index(int n, int k) {
  if (n < 2) raise(ErrorKind::DomainError, "S_n^k needs n >= 2 so that 1/n < 1 < n");
  if (k < 0 || k > 3) raise(ErrorKind::DomainError, "S_n^k needs k in {0, 1, 2, 3}");
  return {1.0 / n, static_cast<double>(n), k / 4.0, (k + 1) / 4.0};
}

Index m0_formula(double R0, double c1, double r0) { return static_cast<Index>(std::floor(R0 * c1 / r0)) + 1; }
Index k0_formula(double c0, double c2) { return static_cast<Index>(std::floor(2.0 * c0 / c2)) + 1; }

ConstantsBundle ConstantsBundle::derive(const SectorSpec& s, double c0, double c1, double c2, double c3) {
  s.validate();
  ConstantsBundle c;
  c.r0 = s.r0;
  c.R0 = s.R0;
  c.theta0 = s.theta0;
  c.thetaT = s.thetaT;
  c.c0 = c0;
  c.c1 = c1;
  c.c2 = c2;
  c.c3 = c3;
  c.c4 = s.r0 * c3 / 2.0;
  c.m0 = m0_formula(s.R0, c1, s.r0);
  c.k0 = k0_formula(c0, c2);
  return c;
}

std::vector<std::string> ConstantsBundle::violations() const {
  std::vector<std::string> out;
  auto fail = [&](const std::string& s) { out.push_back(s); };
  if (!(r0 > 0.0 && r0 < 1.0 && R0 > 1.0)) fail("0 < r0 < 1 < R0");
  if (!(theta0 >= 0.0 && theta0 < thetaT && thetaT <= 1.0)) fail("0 <= theta0 < thetaT <= 1");
  if (!(c0 > 0.0)) fail("c0 > 0");
  if (!(c1 > 0.0)) fail("c1 > 0");
  if (!(c2 > 0.0 && c2 < 1.0)) fail("0 < c2 < 1");
  if (!(c3 > 0.0)) fail("c3 > 0");
  if (c4 != r0 * c3 / 2.0) fail("c4 = r0 c3 / 2");
  if (c1 > 0.0 && r0 > 0.0 && m0 != m0_formula(R0, c1, r0)) fail("m0 = [R0 c1 / r0] + 1");
  if (c2 > 0.0 && k0 != k0_formula(c0, c2)) fail("k0 = [2 c0 / c2] + 1");
  if (m0 < 1 || k0 < 1) fail("m0, k0 >= 1");
  return out;
}

std::vector<std::string> ConstantsBundle::warnings() const {
  std::vector<std::string> out;
  if (!(c0 > 2.0)) out.push_back("c0 <= 2");
  if (!(c1 > 2.0)) out.push_back("c1 <= 2");
  return out;
}

C3Check check_c3(const ConstantsBundle& c, const ComplexSequence& seq, Index horizon) {
  const SequenceAnalysis a = analyze(seq, horizon);
  return {2.0 * c.c3 < a.liminf_scaled_ratio, 2.0 * c.c3, a.liminf_scaled_ratio, horizon};
}

nlohmann::json to_json(const ConstantsBundle& c) {
  nlohmann::json j = {
      {"r0", c.r0}, {"R0", c.R0}, {"theta0", c.theta0}, {"thetaT", c.thetaT}, {"c0", c.c0}, {"c1", c.c1},
      {"c2", c.c2}, {"c3", c.c3}, {"c4", c.c4}, {"m0", c.m0}, {"k0", c.k0},
  };
  j["n0"] = c.n0 ? nlohmann::json(*c.n0) : nlohmann::json("not yet found");
  return j;
}

ConstantsBundle constants_from_json(const nlohmann::json& j) {
  const SectorSpec s{j.value("r0", 0.5), j.value("R0", 2.0), j.value("theta0", 0.0), j.value("thetaT", 0.25)};
  for (const char* key : {"c0", "c1", "c2", "c3"}) {
    if (!j.contains(key)) raise(ErrorKind::ConfigError, std::string("constants need \"") + key + "\"");
  }
  ConstantsBundle c = ConstantsBundle::derive(s, j.at("c0").get<double>(), j.at("c1").get<double>(),
                                              j.at("c2").get<double>(), j.at("c3").get<double>());
  // Explicit overrides are kept verbatim so that violations() can report them.
  if (j.contains("c4")) c.c4 = j.at("c4").get<double>();
  if (j.contains("m0")) c.m0 = j.at("m0").get<Index>();
  if (j.contains("k0")) c.k0 = j.at("k0").get<Index>();
  if (j.contains("n0") && j.at("n0").is_number_integer()) c.n0 = j.at("n0").get<Index>();
  return c;
}

}  // namespace hcv
