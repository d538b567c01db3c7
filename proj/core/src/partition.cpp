#include "hcv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "hcv/error.hpp"
#include "theta_internal.hpp"

namespace hcv {
namespace {

// Offsets mu(0, m, k) for k = 0..k0-1 and mu1(m), summed in index order.
struct Offsets {
  std::vector<double> member;
  double mu1 = 0.0;
};

Offsets offsets(const ComplexSequence& seq, const ConstantsBundle& c, Index m) {
  Offsets o;
  o.member.resize(static_cast<std::size_t>(c.k0));
  double s = 0.0;
  for (Index k = 0; k < c.k0; ++k) {
    if (k > 0) s += c.c2 / seq.modulus(m + k * c.m0 - 1);
    o.member[static_cast<std::size_t>(k)] = s;
  }
  o.mu1 = s + c.c2 / seq.modulus(m + c.k0 * c.m0 - 1);
  return o;
}

struct BlockShape {
  Offsets off;
  bool stopped = false;
  Index nu0 = 0;
  double top = 0.0;  // M^{r,m}
};

BlockShape block_shape(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m, Index max_layers) {
  BlockShape b;
  b.off = offsets(seq, c, m);
  const double mu1v = b.off.mu1;
  const double last = b.off.member.back();
  const double cap = c.c4 / static_cast<double>(m);
  if (!(mu1v > 0.0) || !std::isfinite(mu1v)) raise(ErrorKind::DomainError, "mu1 must be positive and finite");
  if (mu1v >= cap) {
    b.stopped = true;
    b.nu0 = 0;
  } else {
    const double limit = r + cap;
    auto fits = [&](Index n) { return (r + static_cast<double>(n) * mu1v) + last < limit; };
    double est = std::floor((cap - last) / mu1v);
    if (!(est < static_cast<double>(max_layers) * 2.0)) {
      raise(ErrorKind::OutOfBudget, "order-2 block at density " + std::to_string(m) + " needs about " +
                                        std::to_string(est) + " order-1 layers");
    }
    // fits is monotone in n; bisect since r + n mu1 can stall for thousands of n when mu1 < ulp(r).
    Index lo = 0;
    Index hi = std::max<Index>(1, static_cast<Index>(est) + 2);
    while (fits(hi)) hi *= 2;
    while (hi - lo > 1) {
      const Index mid = lo + (hi - lo) / 2;
      if (fits(mid)) lo = mid;
      else hi = mid;
    }
    b.nu0 = lo;
  }
  if (b.nu0 + 1 > max_layers) {
    raise(ErrorKind::OutOfBudget, "order-2 block at density " + std::to_string(m) + " has " +
                                      std::to_string(b.nu0 + 1) + " layers, above the limit");
  }
  b.top = (r + static_cast<double>(b.nu0) * mu1v) + last;
  return b;
}

class Builder {
 public:
  Builder(const ComplexSequence& seq, const ConstantsBundle& c, const BuildLimits& limits)
      : seq_(seq), c_(c), limits_(limits) {}

  std::shared_ptr<const ThetaPartition> theta(Index m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    ThetaPartition tp = build_theta_partition(seq_, c_, m, limits_);
    const std::size_t unresolved = registry_.separate(tp, c_.thetaT);
    if (!tp.perturbed.empty()) {
      notes_.push_back("Delta_" + std::to_string(m) + ": " + std::to_string(tp.perturbed.size()) +
                       " perturbed entries");
    }
    if (unresolved > 0) {
      notes_.push_back("Delta_" + std::to_string(m) + ": " + std::to_string(unresolved) +
                       " theta coincidences could not be separated");
    }
    if (tp.increment_fraction != 0.75) {
      notes_.push_back("Delta_" + std::to_string(m) + ": increment fraction " + std::to_string(tp.increment_fraction));
    }
    registry_.add(tp);
    auto ptr = std::make_shared<const ThetaPartition>(std::move(tp));
    cache_.emplace(m, ptr);
    return ptr;
  }

  std::size_t theta_count(Index m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second->size();
    if (auto it = counts_.find(m); it != counts_.end()) return it->second;
    const std::size_t n = count_theta_partition(seq_, c_, m);
    counts_.emplace(m, n);
    return n;
  }

  Order2Partition order2(double r, Index m, bool with_thetas, double height_limit) {
    const BlockShape b = block_shape(seq_, c_, r, m, limits_.max_layers);
    Order2Partition p;
    p.basis = r;
    p.density = m;
    p.m0 = c_.m0;
    p.mu1 = b.off.mu1;
    p.stopped = b.stopped;
    p.nu0 = b.nu0;
    p.max_modulus = b.top;
    p.min_modulus = r;
    p.member_offsets = b.off.member;
    p.layer_bases.resize(static_cast<std::size_t>(b.nu0 + 1));
    for (Index v = 0; v <= b.nu0; ++v) p.layer_bases[static_cast<std::size_t>(v)] = r + static_cast<double>(v) * b.off.mu1;
    p.member_thetas.resize(static_cast<std::size_t>(c_.k0));
    if (with_thetas) {
      for (Index k = 0; k < c_.k0; ++k) {
        if (p.height(0, k) <= height_limit) p.member_thetas[static_cast<std::size_t>(k)] = theta(m + k * c_.m0);
      }
    }
    return p;
  }

  const std::map<Index, std::shared_ptr<const ThetaPartition>>& cache() const { return cache_; }
  std::vector<std::string>& notes() { return notes_; }

 private:
  const ComplexSequence& seq_;
  const ConstantsBundle& c_;
  BuildLimits limits_;
  detail::ThetaRegistry registry_;
  std::map<Index, std::shared_ptr<const ThetaPartition>> cache_;
  std::unordered_map<Index, std::size_t> counts_;
  std::vector<std::string> notes_;
};

void require_constants(const ConstantsBundle& c) {
  if (c.m0 < 1 || c.k0 < 1) raise(ErrorKind::DomainError, "partition needs m0, k0 >= 1");
  if (!(c.c2 > 0.0) || !(c.c4 > 0.0)) raise(ErrorKind::DomainError, "partition needs c2, c4 > 0");
}

}  // namespace

double mu(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m, Index k) {
  if (k < 0 || k > c.k0 - 1) raise(ErrorKind::DomainError, "mu needs k in [0, k0 - 1]");
  double s = 0.0;
  for (Index j = 1; j <= k; ++j) s += c.c2 / seq.modulus(m + j * c.m0 - 1);
  return r + s;
}

double mu1(const ComplexSequence& seq, const ConstantsBundle& c, Index m) {
  double s = 0.0;
  for (Index j = 1; j <= c.k0; ++j) s += c.c2 / seq.modulus(m + j * c.m0 - 1);
  return s;
}

std::vector<PartitionPoint> Order1Partition::points() const {
  std::vector<PartitionPoint> out;
  for (const auto& mem : members) {
    auto pts = build_arc_partition(*mem.theta, mem.height);
    for (auto& p : pts) p.prov.k_level = mem.k_level;
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

double Order2Partition::height(Index layer, Index k) const {
  return layer_bases[static_cast<std::size_t>(layer)] + member_offsets[static_cast<std::size_t>(k)];
}

Order1Partition Order2Partition::layer(Index nu) const {
  Order1Partition o;
  o.basis = layer_bases.at(static_cast<std::size_t>(nu));
  o.density = density;
  for (std::size_t k = 0; k < member_thetas.size(); ++k) {
    if (!member_thetas[k]) continue;
    o.members.push_back({height(nu, static_cast<Index>(k)), density + static_cast<Index>(k) * m0,
                         static_cast<std::int32_t>(k), member_thetas[k]});
  }
  return o;
}

std::vector<PartitionPoint> Order2Partition::points() const {
  std::vector<PartitionPoint> out;
  for (Index v = 0; v <= nu0; ++v) {
    auto pts = layer(v).points();
    for (auto& p : pts) p.prov.order2_nu = static_cast<std::int32_t>(v);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

Order1Partition build_order1(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m,
                             const BuildLimits& limits) {
  require_constants(c);
  if (!(r > 0.0)) raise(ErrorKind::DomainError, "order-1 basis must be positive");
  Builder b(seq, c, limits);
  Order1Partition o;
  o.basis = r;
  o.density = m;
  for (Index k = 0; k < c.k0; ++k) {
    o.members.push_back({mu(seq, c, r, m, k), m + k * c.m0, static_cast<std::int32_t>(k), b.theta(m + k * c.m0)});
  }
  return o;
}

Order2Partition build_order2(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m,
                             const BuildLimits& limits) {
  require_constants(c);
  if (!(r > 0.0)) raise(ErrorKind::DomainError, "order-2 basis must be positive");
  Builder b(seq, c, limits);
  return b.order2(r, m, true, std::numeric_limits<double>::infinity());
}

RadialPlan plan_radii(const ComplexSequence& seq, const ConstantsBundle& c, Index m, Index max_levels) {
  require_constants(c);
  RadialPlan plan;
  double r = c.r0;
  plan.r_sequence.push_back(r);
  for (Index nu = 0; nu < max_levels; ++nu) {
    if (r >= c.R0) {
      plan.nu1 = nu;
      plan.terminated = true;
      return plan;
    }
    const Index density = m + nu * c.k0 * c.m0;
    const BlockShape b = block_shape(seq, c, r, density, std::numeric_limits<Index>::max() / 4);
    plan.lengths.push_back(b.top - r);
    r = b.top;
    plan.r_sequence.push_back(r);
  }
  if (r >= c.R0) {
    plan.nu1 = max_levels;
    plan.terminated = true;
  }
  return plan;
}

SectorPartition build_sector_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                       const BuildLimits& limits) {
  require_constants(c);
  if (m < 1) raise(ErrorKind::DomainError, "sector partition order must be >= 1");
  const RadialPlan plan = plan_radii(seq, c, m, limits.max_levels);
  if (!plan.terminated) {
    raise(ErrorKind::NonTermination, "r_nu did not reach R0 = " + std::to_string(c.R0) + " within " +
                                         std::to_string(limits.max_levels) + " levels (r = " +
                                         std::to_string(plan.r_sequence.back()) + ")");
  }

  Builder b(seq, c, limits);
  const double rmax = c.R0 + kBoundaryTol;

  SectorPartition sp;
  sp.m = m;
  sp.constants = c;
  sp.nu1 = plan.nu1;
  sp.r_sequence = plan.r_sequence;

  // Shapes first, then the point budget, then the angular data.
  std::size_t total = 0;
  for (Index nu = 0; nu <= plan.nu1; ++nu) {
    const double r = plan.r_sequence[static_cast<std::size_t>(nu)];
    const Index density = m + nu * c.k0 * c.m0;
    SectorLevel lvl;
    lvl.nu = nu;
    lvl.r = r;
    lvl.block = b.order2(r, density, false, rmax);
    for (Index v = 0; v <= lvl.block.nu0; ++v) {
      for (Index k = 0; k < c.k0; ++k) {
        if (lvl.block.height(v, k) > rmax) continue;
        total += b.theta_count(density + k * c.m0);
        if (nu >= 1 && v == 0 && k == 0) --total;
        if (total > limits.max_points) {
          raise(ErrorKind::OutOfBudget, "sector partition needs more than " + std::to_string(limits.max_points) +
                                            " points (reached " + std::to_string(total) + " by level " +
                                            std::to_string(nu) + " of " + std::to_string(plan.nu1) + ")");
        }
      }
    }
    sp.levels.push_back(std::move(lvl));
  }

  sp.points.reserve(total);
  std::optional<std::size_t> previous_top;
  for (auto& lvl : sp.levels) {
    Order2Partition& blk = lvl.block;
    for (Index k = 0; k < c.k0; ++k) {
      if (blk.height(0, k) <= rmax) blk.member_thetas[static_cast<std::size_t>(k)] = b.theta(blk.density + k * c.m0);
    }
    std::optional<std::size_t> top_here;
    for (Index v = 0; v <= blk.nu0; ++v) {
      for (Index k = 0; k < c.k0; ++k) {
        const double h = blk.height(v, k);
        if (h > rmax) continue;
        const auto& tp = blk.member_thetas[static_cast<std::size_t>(k)];
        MemberRecord rec;
        rec.level = static_cast<std::int32_t>(lvl.nu);
        rec.layer = static_cast<std::int32_t>(v);
        rec.k = static_cast<std::int32_t>(k);
        rec.height = h;
        rec.density = tp->m;
        rec.theta = tp;
        const bool seam_member = lvl.nu >= 1 && v == 0 && k == 0 && previous_top.has_value();
        std::size_t start = 0;
        if (seam_member) {
          rec.seam_point = *previous_top;
          sp.points[*previous_top].seam = true;
          start = 1;
        }
        rec.first_point = sp.points.size();
        rec.count = tp->size();
        for (std::size_t t = start; t < tp->size(); ++t) {
          PartitionPoint p;
          p.theta = tp->thetas[t];
          p.r = h;
          p.w = from_turns(h, p.theta);
          p.prov.nu_level = rec.level;
          p.prov.order2_nu = rec.layer;
          p.prov.k_level = rec.k;
          p.prov.density = tp->m;
          p.prov.theta_index = static_cast<Index>(t);
          p.prov.theta_rho = static_cast<Index>(t) / c.m0;
          p.prov.theta_j = static_cast<Index>(t) % c.m0;
          sp.points.push_back(p);
        }
        if (v == blk.nu0 && k == c.k0 - 1) top_here = rec.point_of(0);
        sp.members.push_back(std::move(rec));
      }
    }
    previous_top = top_here;
  }
  sp.thetas = b.cache();
  sp.notes = std::move(b.notes());
  return sp;
}

std::size_t MemberRecord::point_of(Index k) const {
  if (seam_point) {
    if (k == 0) return *seam_point;
    return first_point + static_cast<std::size_t>(k - 1);
  }
  return first_point + static_cast<std::size_t>(k);
}

PartitionEstimate estimate_sector_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                            Index max_levels) {
  PartitionEstimate e;
  e.first_arc_size = estimate_theta_count(seq, c, m);
  const RadialPlan plan = plan_radii(seq, c, m, max_levels);
  e.levels = plan.terminated ? plan.nu1 : static_cast<Index>(plan.lengths.size());
  e.radial_terminated = plan.terminated;
  // Up to 64 evenly strided levels, each standing in for the stride that follows it.
  const Index total = std::max<Index>(e.levels, 1);
  const Index stride = (total + 63) / 64;
  for (Index nu = 0; nu < total; nu += stride) {
    const double r = plan.r_sequence[static_cast<std::size_t>(nu)];
    const Index density = m + nu * c.k0 * c.m0;
    const BlockShape b = block_shape(seq, c, r, density, std::numeric_limits<Index>::max() / 4);
    double per_layer = 0.0;
    for (Index k = 0; k < c.k0; ++k) per_layer += estimate_theta_count(seq, c, density + k * c.m0);
    e.points += per_layer * static_cast<double>(b.nu0 + 1) * static_cast<double>(std::min(stride, total - nu));
  }
  return e;
}

}  // namespace hcv
