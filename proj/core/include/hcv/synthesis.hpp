#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/constants.hpp"
#include "hcv/disks.hpp"
#include "hcv/error.hpp"
#include "hcv/fit.hpp"
#include "hcv/partition.hpp"
#include "hcv/polynomial.hpp"
#include "hcv/properties.hpp"

namespace hcv {

struct ClosedDisk {
  Complex center;
  double radius = 0.0;
};

struct SynthesisProblem {
  Polynomial p = Polynomial::identity();
  EntireFunction g;
  // Evaluation set C; defaults to {|z| <= R1}.
  std::optional<ClosedDisk> C;
  double eps0 = 0.25;
  int s1 = 2;
  int k1 = 1;
  double R1 = 1.0;

  // ConfigError unless s1, k1 >= 1, eps0 > 0, R1 >= k1 and C inside {|z| <= R1}.
  void validate() const;
  ClosedDisk evaluation_set() const;
  // min{1/(2 s1), eps0}
  double fit_tol() const;
  double sweep_tol() const { return 1.0 / s1; }
};

nlohmann::json to_json(const SynthesisProblem& p);
SynthesisProblem problem_from_json(const nlohmann::json& j);

struct Delta0Choice {
  double delta0 = 0.0;
  double max_derivative = 0.0;  // estimated max |p'| on |z| = R1 + 1
  bool validated = false;
  std::size_t pairs = 0;
  int halvings = 0;
};

// delta0 = min(0.9, target / (1 + max |p'|)), validated on random pairs |z| <= R1, |z - w| < delta0
// and halved until the validation passes. DegenerateTarget when target <= 0.
Delta0Choice choose_delta0_detailed(const Polynomial& p, double R1, double target, std::uint64_t seed = 20240611,
                                    std::size_t pairs = 4096);
double choose_delta0(const Polynomial& p, double R1, double target);

// c0 = R1 + delta0, c1 = 4 pi c0 / delta0, c2 = delta0 / (2 R0), c4 = r0 c3 / 2, m0, k0; no n0.
ConstantsBundle synthesis_constants(const SectorSpec& s, double R1, double delta0, double c3);
// Estimated default c3: 0.45 times the windowed liminf of n(|lambda_{n+1}/lambda_n| - 1), capped at 1.
double default_c3(const ComplexSequence& seq, Index horizon = 10000);

struct N0Options {
  Index n_max = 4'000'000;
  Index n_check = 0;  // 0: 2 n_max
};

// synthesis_constants followed by find_n0. DomainError when 2 c3 is not below the liminf estimate;
// NotFound from find_n0.
ConstantsBundle derive_constants(const SynthesisProblem& prob, const SectorSpec& s, double c3,
                                 const ComplexSequence& seq, double delta0, const N0Options& opt = {},
                                 N0Search* search = nullptr);

// h = g on B, h(z) = p(z - w lambda(w)) on B_w.
TargetSet assemble_targets(const DiskFamily& fam, const SynthesisProblem& prob, std::size_t samples_per_disk = 256);

struct Anchor {
  std::size_t point_index = 0;
  PartitionPoint point;
  double r = 0.0;
  double t = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  Index density = 0;
  // Order-0 partitions sharing height r_lo.
  std::size_t coincident = 0;
};

// Brackets |a| by the order-0 heights and arg a by the angles of the densest partition at r_lo.
// Values within snap (relative) above a height or angle count as on it.
class AnchorLocator {
 public:
  explicit AnchorLocator(const SectorPartition& sp, double snap = 1e-12);
  // OutsideSector when a is outside S by more than tol; InsufficientCoverage for an empty partition.
  Anchor locate(Complex a, double tol = 1e-9) const;

 private:
  const SectorPartition& sp_;
  double snap_;
  std::vector<double> heights_;
  std::vector<std::size_t> member_;
  std::vector<std::size_t> coincident_;
};

Anchor locate_anchor(Complex a, const SectorPartition& sp);

struct BoundCheck {
  double sup_error = 0.0;
  bool pass = false;
  double anchor_lhs = 0.0;  // |lambda(w0)| |a - w0|, must be < delta0
  bool anchor_ok = false;
  double containment_max = 0.0;  // max over |z| <= R1 of |z + a lambda - w0 lambda|, must be < R1 + delta0
  bool containment_ok = false;
  // measured <= 1/(2 s1) + 1/(2 s1)
  bool composition_ok = false;
};

// sup over |z| = k1 (n_samples points) and z = 0 of |f(z + a lambda) - p(z)|, with the anchor
// inequality and the containment check on |z| = R1.
BoundCheck verify_translation_bound(const std::function<Complex(Complex)>& f, Complex a, Complex w0, Complex lambda,
                                    const SynthesisProblem& prob, double delta0, std::size_t n_samples = 64);

struct SweepOptions {
  int n_r = 51;
  int n_t = 51;
  std::size_t n_samples = 64;
  unsigned threads = 1;
};

struct SweepSample {
  int i = 0;
  int j = 0;
  double r = 0.0;
  double t = 0.0;
  Complex a;
  std::size_t point_index = 0;
  Complex w0;
  Index lambda_index = 0;
  BoundCheck check;
};

struct SweepReport {
  int n_r = 0;
  int n_t = 0;
  std::vector<SweepSample> samples;
  Index m1 = 0;
  std::vector<std::size_t> failures;
  double max_sup_error = 0.0;
  bool all_anchor_ok = true;
  bool all_containment_ok = true;
  bool all_within_m1 = true;
  bool all_composition_ok = true;

  bool passed() const { return failures.empty(); }
};

// n_r x n_t tensor grid over [r0, R0] x [theta0, thetaT], edges included, reported in grid order.
// per_disk_sup (fit boundary sup per disk, base first) sharpens the error-composition check.
SweepReport sector_sweep(const std::function<Complex(Complex)>& f, const SectorPartition& sp, const DiskFamily& fam,
                         const SynthesisProblem& prob, const ComplexSequence& seq, double delta0,
                         const SweepOptions& opt = {}, const std::vector<double>* per_disk_sup = nullptr);

struct SynthesisOptions {
  std::optional<Index> m;                     // default n0
  std::optional<ConstantsBundle> constants;  // skips derivation; hypotheses are then not verified
  std::optional<double> c3;
  N0Options n0;
  BuildLimits limits;
  std::size_t samples_per_disk = 256;
  FitOptions fit;  // tol is replaced by min{1/(2 s1), eps0}
  SweepOptions sweep;
  bool check_lemmas = true;
  std::uint64_t seed = 20240611;
  // "partition" or "disks" ends the run after that stage with completed == false.
  std::string stop_after;
};

struct SynthesisOutcome {
  // Last stage attempted: delta0, constants, find_n0, partition, disks, targets, fit, sweep, done.
  std::string stage;
  bool completed = false;
  std::optional<ErrorKind> error;
  std::string message;
  Delta0Choice delta0;
  std::optional<ConstantsBundle> constants;
  std::optional<N0Search> n0_search;
  Index m = 0;
  std::optional<PartitionEstimate> estimate;
  std::optional<SectorPartition> partition;
  std::optional<LemmaReport> partition_lemmas;
  std::optional<DiskFamily> family;
  std::optional<DisjointReport> disjoint;
  std::optional<FitResult> fit;
  double g_sup_error = 0.0;  // (5.2): sup over C of |f - g|
  bool g_check_ok = false;
  std::optional<SweepReport> sweep;
  bool hypotheses_verified = false;
  std::vector<std::string> notes;

  // 0 sweep passed, 1 sweep failures, 3 construction failure, 4 fit cap reached.
  int exit_code() const;
};

SynthesisOutcome synthesize(const ComplexSequence& seq, const SectorSpec& sector, const SynthesisProblem& prob,
                            const SynthesisOptions& opt = {});

nlohmann::json to_json(const Delta0Choice& d);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const SynthesisOutcome& o);

}  // namespace hcv
