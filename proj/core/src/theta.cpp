#include <algorithm>
#include <cmath>
#include <string>

#include "hcv/error.hpp"
#include "hcv/partition.hpp"
#include "theta_internal.hpp"

namespace hcv {
namespace {

struct ThetaPlan {
  ThetaCase theta_case = ThetaCase::Case1;
  Index j0 = 0;
  double fraction = 0.75;
  std::vector<double> base;  // theta_0 .. theta_J
  std::vector<double> lower;
  std::vector<double> upper;
  double sigma = 0.0;
  Index last = 0;  // index of the last entry of Delta_m
  std::optional<Index> collision;
  double collision_value = 0.0;
  double approx_count = 0.0;  // Case 3 size estimate range / sigma * m0
};

double theta_at(const ThetaPlan& p, Index m0, Index k) {
  if (k <= m0) return p.base[static_cast<std::size_t>(k)];
  const Index nu = k / m0;
  const Index j = k % m0;
  return p.base[static_cast<std::size_t>(j)] + static_cast<double>(nu) * p.sigma;
}

// With exact == false an oversized Case 3 partition returns with last = -1 and only approx_count set.
ThetaPlan plan_theta(const ComplexSequence& seq, const ConstantsBundle& c, Index m, bool exact = true) {
  if (m < 1) raise(ErrorKind::DomainError, "theta partition density must be >= 1");
  if (c.m0 < 1) raise(ErrorKind::DomainError, "theta partition needs m0 >= 1");
  const Index m0 = c.m0;
  const double range = c.thetaT - c.theta0;
  ThetaPlan p;

  std::vector<double> U(static_cast<std::size_t>(m0 + 1));
  for (Index j = 0; j <= m0; ++j) {
    const double mod = seq.modulus(m + j);
    if (!std::isfinite(mod)) {
      raise(ErrorKind::NonFinite, "theta partition needs finite |lambda_" + std::to_string(m + j) + "|");
    }
    U[static_cast<std::size_t>(j)] = c.c0 / (c.R0 * c.c1 * mod);
  }
  p.upper.assign(U.begin(), U.begin() + m0);
  p.lower.resize(p.upper.size());
  for (std::size_t j = 0; j < p.upper.size(); ++j) p.lower[j] = p.upper[j] / 2.0;

  if (U[0] / 2.0 >= range) {
    p.theta_case = ThetaCase::Case1;
    p.base = {c.theta0};
    p.last = 0;
    return p;
  }

  Index increments = m0;
  double half_sum = U[0] / 2.0;
  for (Index jp = 1; jp <= m0; ++jp) {
    half_sum += U[static_cast<std::size_t>(jp)] / 2.0;
    if (half_sum >= range) {
      p.theta_case = ThetaCase::Case2;
      p.j0 = jp;
      increments = jp - 1;
      break;
    }
  }
  if (p.theta_case != ThetaCase::Case2) p.theta_case = ThetaCase::Case3;

  double full = 0.0;
  for (Index j = 0; j < increments; ++j) full += U[static_cast<std::size_t>(j)];
  // The 3/4 point of (I) can overshoot thetaT; fall back to the midpoint of (1/2, range/full).
  const double limit = c.thetaT - 2.0 * kBoundaryTol;
  if (increments > 0 && !(c.theta0 + 0.75 * full * (1.0 + 1e-12) < limit)) {
    p.fraction = 0.5 * (0.5 + range / full);
  }
  p.base.resize(static_cast<std::size_t>(increments + 1));
  p.base[0] = c.theta0;
  for (Index j = 0; j < increments; ++j) {
    p.base[static_cast<std::size_t>(j + 1)] = p.base[static_cast<std::size_t>(j)] + p.fraction * U[static_cast<std::size_t>(j)];
  }
  if (increments > 0 && !(p.base.back() < c.thetaT)) {
    raise(ErrorKind::DomainError, "theta partition: no admissible increment keeps the base below thetaT");
  }

  if (p.theta_case == ThetaCase::Case2) {
    p.last = increments;
    return p;
  }

  p.sigma = p.base[static_cast<std::size_t>(m0)] - c.theta0;
  p.approx_count = (std::ceil(range / p.sigma) + 2.0) * static_cast<double>(m0);
  if (!(p.approx_count < 1e15)) {
    if (!exact) {
      p.last = -1;
      return p;
    }
    raise(ErrorKind::OutOfBudget, "Delta_" + std::to_string(m) + " would have about " +
                                      std::to_string(p.approx_count) + " entries");
  }
  // Largest k >= m0 with theta_k < thetaT; theta_k is increasing in k.
  Index lo = m0;
  Index hi = static_cast<Index>(p.approx_count);
  while (!(theta_at(p, m0, hi) >= c.thetaT)) hi *= 2;
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    if (theta_at(p, m0, mid) < c.thetaT) lo = mid;
    else hi = mid;
  }
  p.last = lo;

  // An extended value equal to thetaT within tolerance is pulled back by half its (I) room.
  for (Index k : {lo, lo + 1}) {
    if (k < m0 + 1) continue;
    const double t = theta_at(p, m0, k);
    if (std::abs(t - c.thetaT) <= kBoundaryTol) {
      const double gap = t - theta_at(p, m0, k - 1);
      const double room = gap - p.lower[static_cast<std::size_t>((k - 1) % m0)];
      p.collision = k;
      p.collision_value = t - room / 2.0;
      p.last = k;
      break;
    }
  }
  return p;
}

}  // namespace

bool ThetaPartition::is_perturbed(Index k) const {
  return std::find(perturbed.begin(), perturbed.end(), k) != perturbed.end();
}

std::size_t count_theta_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m) {
  return static_cast<std::size_t>(plan_theta(seq, c, m).last + 1);
}

double estimate_theta_count(const ComplexSequence& seq, const ConstantsBundle& c, Index m) {
  const ThetaPlan p = plan_theta(seq, c, m, false);
  return p.last < 0 ? p.approx_count : static_cast<double>(p.last + 1);
}

ThetaPartition build_theta_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                     const BuildLimits& limits) {
  ThetaPlan p = plan_theta(seq, c, m);
  const std::size_t n = static_cast<std::size_t>(p.last + 1);
  if (n > limits.max_thetas) {
    raise(ErrorKind::OutOfBudget, "Delta_" + std::to_string(m) + " has " + std::to_string(n) +
                                      " entries, above the limit " + std::to_string(limits.max_thetas));
  }
  ThetaPartition tp;
  tp.m = m;
  tp.m0 = c.m0;
  tp.theta_case = p.theta_case;
  tp.increment_fraction = p.fraction;
  if (p.theta_case != ThetaCase::Case1) {
    tp.lower = p.lower;
    tp.upper = p.upper;
  }
  tp.thetas.resize(n);
  for (Index k = 0; k <= p.last; ++k) tp.thetas[static_cast<std::size_t>(k)] = theta_at(p, c.m0, k);
  if (p.theta_case == ThetaCase::Case2) tp.j0 = p.j0;
  if (p.theta_case == ThetaCase::Case3) {
    tp.sigma = p.sigma;
    tp.nu_m = p.last;
    if (p.collision) {
      tp.thetas[static_cast<std::size_t>(*p.collision)] = p.collision_value;
      tp.perturbed.push_back(*p.collision);
    }
  }
  return tp;
}

std::vector<PartitionPoint> build_arc_partition(const ThetaPartition& tp, double r) {
  if (!(r > 0.0)) raise(ErrorKind::DomainError, "arc partition height must be positive");
  std::vector<PartitionPoint> out(tp.thetas.size());
  const Index m0 = std::max<Index>(tp.m0, 1);
  for (std::size_t k = 0; k < tp.thetas.size(); ++k) {
    PartitionPoint& p = out[k];
    p.theta = tp.thetas[k];
    p.r = r;
    p.w = from_turns(r, p.theta);
    p.prov.density = tp.m;
    p.prov.theta_index = static_cast<Index>(k);
    p.prov.theta_rho = static_cast<Index>(k) / m0;
    p.prov.theta_j = static_cast<Index>(k) % m0;
  }
  return out;
}

namespace detail {

bool ThetaRegistry::collides(double theta) const {
  auto it = values_.lower_bound(theta - tol_);
  return it != values_.end() && *it <= theta + tol_;
}

void ThetaRegistry::add(const ThetaPartition& tp) {
  for (std::size_t k = 1; k < tp.thetas.size(); ++k) values_.insert(tp.thetas[k]);
}

std::size_t ThetaRegistry::separate(ThetaPartition& tp, double thetaT) const {
  std::size_t unresolved = 0;
  const std::size_t n = tp.thetas.size();
  const Index m0 = std::max<Index>(tp.m0, 1);
  for (std::size_t k = 1; k < n; ++k) {
    if (!collides(tp.thetas[k])) continue;
    const double t = tp.thetas[k];
    const std::size_t jp = static_cast<std::size_t>((static_cast<Index>(k) - 1) % m0);
    double slack = tp.upper[jp] - (t - tp.thetas[k - 1]);
    if (k + 1 < n) {
      const std::size_t jn = static_cast<std::size_t>(static_cast<Index>(k) % m0);
      slack = std::min(slack, (tp.thetas[k + 1] - t) - tp.lower[jn]);
    } else {
      slack = std::min(slack, thetaT - kBoundaryTol - t);
    }
    double nudge = 1e-9 * slack;
    while (collides(t + nudge) && nudge < 0.5 * slack) nudge = std::min(nudge * 10.0, 0.5 * slack);
    if (slack <= 0.0 || collides(t + nudge)) {
      ++unresolved;
      continue;
    }
    tp.thetas[k] = t + nudge;
    tp.perturbed.push_back(static_cast<Index>(k));
  }
  std::sort(tp.perturbed.begin(), tp.perturbed.end());
  return unresolved;
}

}  // namespace detail
}  // namespace hcv
