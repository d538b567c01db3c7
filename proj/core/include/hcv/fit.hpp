#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/types.hpp"

namespace hcv {

// Samples of a piecewise target on a union of disjoint closed disks.
struct TargetSet {
  std::vector<Complex> centers;
  std::vector<double> radii;
  std::vector<Complex> z;
  std::vector<Complex> h;
  std::vector<std::size_t> disk_of;
  std::vector<bool> on_boundary;
  std::size_t boundary_per_disk = 0;
  std::size_t interior_per_disk = 0;
  // h on disk d at z; used to re-sample for certification.
  std::function<Complex(std::size_t, Complex)> h_fn;

  std::size_t disks() const { return centers.size(); }
};

// Samples boundary_per_disk equally spaced boundary points and a 3x3 interior grid
// (interior_per_disk = 9) clipped to half the radius.
TargetSet sample_targets(std::vector<Complex> centers, std::vector<double> radii,
                         std::function<Complex(std::size_t, Complex)> h_fn, std::size_t boundary_per_disk = 256);

struct FitOptions {
  std::vector<int> degree_schedule = {8, 16, 32, 64, 128, 256, 512};
  double tol = 1e-6;
  double ill_conditioned_threshold = 1e13;
  // Re-measurement densities relative to boundary_per_disk.
  std::vector<int> certify_factors = {2, 4};
  std::size_t block_rows = 4096;
  // Budget on samples x (degree + 1). Larger degrees are skipped; OutOfBudget if none fits.
  double max_matrix_entries = 2e8;
};

struct FitAttempt {
  int degree = 0;
  double global_sup_error = 0.0;
  double condition_estimate = 0.0;
};

// f(z) = sum_k coefficients[k] u^k with u = (z - center) / scale.
struct FitResult {
  Complex center;
  double scale = 1.0;
  std::vector<Complex> coefficients;
  int degree = 0;
  std::vector<double> per_disk_sup_error;
  double global_sup_error = 0.0;
  double target_tol = 0.0;
  bool success = false;
  bool ill_conditioned = false;
  double condition_estimate = 0.0;
  // Boundary sup re-measured at each certify factor; certified when every one is within 10%.
  std::vector<double> certified_sup;
  bool certified = false;
  std::vector<FitAttempt> attempts;
  std::string message;

  Complex operator()(Complex z) const;
  // Coefficients in powers of z. Poorly conditioned for large scale or center.
  std::vector<Complex> monomial_coefficients() const;
};

FitResult fit_polynomial(const TargetSet& targets, const FitOptions& opt = {});

// Boundary sup of |f - h| on each disk with n samples per circle.
std::vector<double> boundary_sup(const FitResult& f, const TargetSet& targets, std::size_t n);

nlohmann::json to_json(const FitResult& r);

}  // namespace hcv
