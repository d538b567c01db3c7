#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hcv/constants.hpp"
#include "hcv/sequence.hpp"

namespace hcv {

enum class ThetaCase { Case1 = 1, Case2 = 2, Case3 = 3 };

struct ThetaPartition {
  Index m = 0;
  Index m0 = 0;
  ThetaCase theta_case = ThetaCase::Case1;
  std::vector<double> thetas;
  std::optional<double> sigma;  // Case 3
  std::optional<Index> nu_m;    // Case 3: index of the last entry
  std::optional<Index> j0;      // Case 2
  // Fraction of the (I) upper bound used for every base increment.
  double increment_fraction = 0.75;
  // (I) bounds c0/(2 R0 c1 |lambda_{m+j}|) and c0/(R0 c1 |lambda_{m+j}|), j = 0..m0-1 (empty in Case 1).
  std::vector<double> lower;
  std::vector<double> upper;
  // Entries moved by the thetaT-collision rule or the almost-disjoint nudge.
  std::vector<Index> perturbed;

  std::size_t size() const { return thetas.size(); }
  bool is_perturbed(Index k) const;
};

struct BuildLimits {
  std::size_t max_points = 2'000'000;
  std::size_t max_thetas = 2'000'000;
  Index max_levels = 20'000;
  Index max_layers = 2'000'000;
};

// Index range [m, m + span] of lambda terms a density-m theta partition reads.
ThetaPartition build_theta_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                     const BuildLimits& limits = {});
// Number of entries build_theta_partition would produce, without materializing them.
// OutOfBudget when the count is beyond 1e15.
std::size_t count_theta_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m);
// Exact count when feasible, otherwise range / sigma_m * m0.
double estimate_theta_count(const ComplexSequence& seq, const ConstantsBundle& c, Index m);

struct PointProvenance {
  std::int32_t nu_level = 0;   // stacking index in P_m
  std::int32_t order2_nu = 0;  // order-1 layer within the order-2 block
  std::int32_t k_level = 0;    // member within the order-1 partition
  Index density = 0;           // density m' of the owning arc partition
  Index theta_index = 0;       // k with theta_k in Delta_{m'}
  Index theta_rho = 0;         // k = rho m0 + j
  Index theta_j = 0;
};

struct PartitionPoint {
  Complex w;
  double r = 0.0;
  double theta = 0.0;
  PointProvenance prov;
  Index lambda_index = 0;
  // r_nu e^{2 pi i theta0} shared by two adjacent levels, nu >= 1.
  bool seam = false;
};

// phi_r(Delta_m) with density and theta-index provenance.
std::vector<PartitionPoint> build_arc_partition(const ThetaPartition& tp, double r);

// mu(r, m, k) = r + sum_{j=1}^{k} c2 / |lambda_{m + j m0 - 1}|
double mu(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m, Index k);
// mu1(m) = sum_{j=1}^{k0} c2 / |lambda_{m + j m0 - 1}|
double mu1(const ComplexSequence& seq, const ConstantsBundle& c, Index m);

struct ArcMember {
  double height = 0.0;
  Index density = 0;
  std::int32_t k_level = 0;
  std::shared_ptr<const ThetaPartition> theta;
};

struct Order1Partition {
  double basis = 0.0;
  Index density = 0;
  std::vector<ArcMember> members;
  std::vector<PartitionPoint> points() const;
};

struct Order2Partition {
  double basis = 0.0;
  Index density = 0;
  Index m0 = 0;
  double mu1 = 0.0;
  bool stopped = false;  // mu1 >= c4 / m: a single order-1 layer
  Index nu0 = 0;         // last layer index
  double max_modulus = 0.0;
  double min_modulus = 0.0;
  std::vector<double> layer_bases;     // r + nu mu1
  std::vector<double> member_offsets;  // mu(0, m, k), k = 0..k0-1
  std::vector<std::shared_ptr<const ThetaPartition>> member_thetas;

  double height(Index layer, Index k) const;
  double length() const { return max_modulus - basis; }
  Order1Partition layer(Index nu) const;
  std::vector<PartitionPoint> points() const;
};

Order1Partition build_order1(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m,
                             const BuildLimits& limits = {});
Order2Partition build_order2(const ComplexSequence& seq, const ConstantsBundle& c, double r, Index m,
                             const BuildLimits& limits = {});

// Contiguous run of points in SectorPartition::points produced by one arc partition.
struct MemberRecord {
  std::int32_t level = 0;
  std::int32_t layer = 0;
  std::int32_t k = 0;
  double height = 0.0;
  Index density = 0;
  std::shared_ptr<const ThetaPartition> theta;
  // Index of the point with theta index 1 (or 0 when not a seam member).
  std::size_t first_point = 0;
  std::size_t count = 0;
  // Bottom member of level >= 1: its theta0 point is the previous level's top point.
  std::optional<std::size_t> seam_point;

  // Position in the flat list of theta index k.
  std::size_t point_of(Index k) const;
};

struct SectorLevel {
  Index nu = 0;
  double r = 0.0;
  Order2Partition block;
};

struct SectorPartition {
  Index m = 0;
  ConstantsBundle constants;
  std::vector<SectorLevel> levels;
  std::vector<PartitionPoint> points;
  std::vector<MemberRecord> members;  // only members with points in S, in build order
  Index nu1 = 0;
  std::vector<double> r_sequence;
  std::map<Index, std::shared_ptr<const ThetaPartition>> thetas;
  std::vector<std::string> notes;
};

// Radial plan only: r_nu, mu1, nu0 per level, no angular data. Cheap diagnostics.
struct RadialPlan {
  std::vector<double> r_sequence;
  std::vector<double> lengths;
  Index nu1 = 0;
  bool terminated = false;
};
RadialPlan plan_radii(const ComplexSequence& seq, const ConstantsBundle& c, Index m, Index max_levels);

SectorPartition build_sector_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                       const BuildLimits& limits = {});

struct PartitionEstimate {
  // nu1 when the plan terminates: level nu1 itself starts at r >= R0 and adds no interior points.
  Index levels = 0;
  bool radial_terminated = false;
  double points = 0.0;  // materialized points if built, as a double since it may overflow
  double first_arc_size = 0.0;
};
// Point-count estimate so callers can report why a build is out of budget.
PartitionEstimate estimate_sector_partition(const ComplexSequence& seq, const ConstantsBundle& c, Index m,
                                            Index max_levels);

}  // namespace hcv

#include "hcv/lemmas.hpp"

namespace hcv {

// Structural checks of a built partition: inequality (I), the almost-disjoint property,
// nesting and ordering of heights, and the radial step bound.
LemmaReport check_partition_lemmas(const SectorPartition& sp, double margin = kStrictMargin);

}  // namespace hcv
