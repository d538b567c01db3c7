#include "hcv/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {
namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

void fill_rows(Mat& A, Vec& b, Eigen::Index row0, const TargetSet& t, std::size_t first, std::size_t count,
               Complex center, double scale, int degree) {
  for (std::size_t i = 0; i < count; ++i) {
    const Complex u = (t.z[first + i] - center) / scale;
    Complex pw = 1.0;
    const Eigen::Index r = row0 + static_cast<Eigen::Index>(i);
    for (int k = 0; k <= degree; ++k) {
      A(r, k) = pw;
      pw *= u;
    }
    b(r) = t.h[first + i];
  }
}

struct Solve {
  std::vector<Complex> coeffs;
  double cond = 0.0;
};

// Blocked Householder (TSQR): fold rows into an upper-triangular R and Q^H b, then solve
// R a = y with column pivoting.
Solve least_squares(const TargetSet& t, Complex center, double scale, int degree, std::size_t block_rows) {
  const Eigen::Index n = degree + 1;
  const std::size_t rows = t.z.size();
  const std::size_t block = std::max<std::size_t>(block_rows, 2 * static_cast<std::size_t>(n));
  Mat R;
  Vec y;
  std::size_t pos = 0;
  while (pos < rows) {
    const std::size_t take = std::min(block, rows - pos);
    const Eigen::Index top = R.rows();
    Mat A(top + static_cast<Eigen::Index>(take), n);
    Vec b(A.rows());
    if (top > 0) {
      A.topRows(top) = R;
      b.head(top) = y;
    }
    fill_rows(A, b, top, t, pos, take, center, scale, degree);
    Eigen::HouseholderQR<Mat> qr(A);
    const Eigen::Index keep = std::min<Eigen::Index>(A.rows(), n);
    R = qr.matrixQR().topRows(keep).triangularView<Eigen::Upper>();
    y = (qr.householderQ().adjoint() * b).head(keep);
    pos += take;
  }
  Eigen::ColPivHouseholderQR<Mat> cp(R);
  Vec a = cp.solve(y);
  Solve s;
  s.coeffs.assign(a.data(), a.data() + a.size());
  const auto diag = cp.matrixQR().diagonal();
  const double first = std::abs(diag(0));
  const double last = std::abs(diag(diag.size() - 1));
  s.cond = last > 0.0 ? first / last : std::numeric_limits<double>::infinity();
  return s;
}

Complex horner(const std::vector<Complex>& c, Complex u) {
  Complex acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<double> sampled_sup(const FitResult& f, const TargetSet& t) {
  std::vector<double> sup(t.disks(), 0.0);
  for (std::size_t i = 0; i < t.z.size(); ++i) {
    if (!t.on_boundary[i]) continue;
    const double e = std::abs(f(t.z[i]) - t.h[i]);
    double& s = sup[t.disk_of[i]];
    if (!(e <= s)) s = e;
  }
  return sup;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!(x <= m)) m = x;
  }
  return m;
}

}  // namespace

TargetSet sample_targets(std::vector<Complex> centers, std::vector<double> radii,
                         std::function<Complex(std::size_t, Complex)> h_fn, std::size_t boundary_per_disk) {
  if (centers.size() != radii.size()) raise(ErrorKind::DomainError, "centers and radii differ in length");
  if (boundary_per_disk < 1) raise(ErrorKind::DomainError, "need at least one boundary sample per disk");
  TargetSet t;
  t.centers = std::move(centers);
  t.radii = std::move(radii);
  t.h_fn = std::move(h_fn);
  t.boundary_per_disk = boundary_per_disk;
  t.interior_per_disk = 9;
  const std::size_t per = boundary_per_disk + t.interior_per_disk;
  t.z.reserve(t.disks() * per);
  for (std::size_t d = 0; d < t.disks(); ++d) {
    const Complex c = t.centers[d];
    const double r = t.radii[d];
    for (std::size_t k = 0; k < boundary_per_disk; ++k) {
      t.z.push_back(c + from_turns(r, static_cast<double>(k) / static_cast<double>(boundary_per_disk)));
      t.on_boundary.push_back(true);
      t.disk_of.push_back(d);
    }
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        t.z.push_back(c + Complex(0.5 * r * a / std::sqrt(2.0), 0.5 * r * b / std::sqrt(2.0)));
        t.on_boundary.push_back(false);
        t.disk_of.push_back(d);
      }
    }
  }
  t.h.resize(t.z.size());
  for (std::size_t i = 0; i < t.z.size(); ++i) t.h[i] = t.h_fn(t.disk_of[i], t.z[i]);
  return t;
}

Complex FitResult::operator()(Complex z) const { return horner(coefficients, (z - center) / scale); }

std::vector<Complex> FitResult::monomial_coefficients() const {
  // Horner on polynomials: P <- P * (z - center) / scale + a_k.
  std::vector<Complex> p;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    std::vector<Complex> q(p.size() + 1, Complex{});
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k + 1] += p[k] / scale;
      q[k] -= p[k] * center / scale;
    }
    q[0] += *it;
    p = std::move(q);
  }
  return p;
}

std::vector<double> boundary_sup(const FitResult& f, const TargetSet& t, std::size_t n) {
  std::vector<double> sup(t.disks(), 0.0);
  for (std::size_t d = 0; d < t.disks(); ++d) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex z = t.centers[d] + from_turns(t.radii[d], static_cast<double>(k) / static_cast<double>(n));
      const double e = std::abs(f(z) - t.h_fn(d, z));
      if (!(e <= sup[d])) sup[d] = e;
    }
  }
  return sup;
}

FitResult fit_polynomial(const TargetSet& t, const FitOptions& opt) {
  if (t.z.empty() || t.disks() == 0) raise(ErrorKind::DomainError, "fit_polynomial needs samples");
  if (opt.degree_schedule.empty()) raise(ErrorKind::DomainError, "empty degree schedule");

  // Bounding disk of the union, mapped to the unit disk.
  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
  for (std::size_t d = 0; d < t.disks(); ++d) {
    xlo = std::min(xlo, t.centers[d].real() - t.radii[d]);
    xhi = std::max(xhi, t.centers[d].real() + t.radii[d]);
    ylo = std::min(ylo, t.centers[d].imag() - t.radii[d]);
    yhi = std::max(yhi, t.centers[d].imag() + t.radii[d]);
  }
  const Complex center(0.5 * (xlo + xhi), 0.5 * (ylo + yhi));
  double scale = 0.0;
  for (std::size_t d = 0; d < t.disks(); ++d) scale = std::max(scale, std::abs(t.centers[d] - center) + t.radii[d]);
  if (!(scale > 0.0)) scale = 1.0;

  FitResult best;
  best.global_sup_error = std::numeric_limits<double>::infinity();
  std::vector<FitAttempt> attempts;
  const int max_degree = static_cast<int>(t.z.size()) - 1;
  bool budget_hit = false;
  for (int deg : opt.degree_schedule) {
    if (deg < 0) raise(ErrorKind::DomainError, "negative degree in schedule");
    const int d = std::min(deg, max_degree);
    if (!attempts.empty() && attempts.back().degree == d) continue;
    if (static_cast<double>(t.z.size()) * (d + 1) > opt.max_matrix_entries) {
      if (attempts.empty()) {
        raise(ErrorKind::OutOfBudget, std::to_string(t.z.size()) + " samples at degree " + std::to_string(d) +
                                          " exceed the fit budget of " + std::to_string(opt.max_matrix_entries) +
                                          " matrix entries");
      }
      budget_hit = true;
      break;
    }
    const Solve s = least_squares(t, center, scale, d, opt.block_rows);
    FitResult r;
    r.center = center;
    r.scale = scale;
    r.coefficients = s.coeffs;
    r.degree = d;
    r.condition_estimate = s.cond;
    r.per_disk_sup_error = sampled_sup(r, t);
    r.global_sup_error = max_of(r.per_disk_sup_error);
    attempts.push_back({d, r.global_sup_error, s.cond});
    const bool ok = r.global_sup_error < opt.tol;
    if (ok || r.global_sup_error < best.global_sup_error) best = std::move(r);
    if (ok) break;
  }
  best.attempts = std::move(attempts);
  best.target_tol = opt.tol;
  best.success = best.global_sup_error < opt.tol;
  best.ill_conditioned = !(best.condition_estimate <= opt.ill_conditioned_threshold);

  best.certified = true;
  for (int f : opt.certify_factors) {
    const double s = max_of(boundary_sup(best, t, t.boundary_per_disk * static_cast<std::size_t>(f)));
    best.certified_sup.push_back(s);
    const double diff = std::abs(s - best.global_sup_error);
    if (!(diff < 0.1 * best.global_sup_error || diff < 1e-14)) best.certified = false;
  }
  if (best.success) {
    best.message = "boundary sup " + std::to_string(best.global_sup_error) + " < tol at degree " + std::to_string(best.degree);
  } else {
    best.message = "degree schedule exhausted: best boundary sup " + std::to_string(best.global_sup_error) +
                   " at degree " + std::to_string(best.degree);
    if (budget_hit) best.message += " (higher degrees exceed the matrix budget)";
  }
  if (best.ill_conditioned) best.message += "; IllConditioned (estimate " + std::to_string(best.condition_estimate) + ")";
  return best;
}

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json attempts = nlohmann::json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back({{"degree", a.degree}, {"global_sup_error", real_to_json(a.global_sup_error)},
                        {"condition_estimate", real_to_json(a.condition_estimate)}});
  }
  nlohmann::json per = nlohmann::json::array();
  for (double e : r.per_disk_sup_error) per.push_back(real_to_json(e));
  nlohmann::json cert = nlohmann::json::array();
  for (double e : r.certified_sup) cert.push_back(real_to_json(e));
  return {{"basis", {{"center", complex_to_json(r.center)}, {"scale", r.scale}}},
          {"coefficients", complex_list_to_json(r.coefficients)},
          {"degree", r.degree},
          {"per_disk_sup_error", per},
          {"global_sup_error", real_to_json(r.global_sup_error)},
          {"target_tol", r.target_tol},
          {"success", r.success},
          {"ill_conditioned", r.ill_conditioned},
          {"condition_estimate", real_to_json(r.condition_estimate)},
          {"certified_sup", cert},
          {"certified", r.certified},
          {"attempts", attempts},
          {"message", r.message}};
}

}  // namespace hcv
