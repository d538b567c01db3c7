#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/lemmas.hpp"
#include "hcv/partition.hpp"

namespace hcv {

enum class DiskTag { Base, Translated };

struct Disk {
  Complex center;
  double radius = 0.0;
  DiskTag tag = DiskTag::Base;
  // Position in SectorPartition::points; -1 for the base disk.
  std::int64_t point_index = -1;
  Index lambda_index = 0;
};

// B = {|z| <= c0} followed by B_w = B + w lambda(w) for every partition point.
struct DiskFamily {
  std::vector<Disk> disks;
  Index m = 0;
  double radius = 0.0;
  // min over pairs of |c_i - c_j| - 2 c0; +inf for fewer than two disks.
  double min_separation = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  // m1: the largest lambda index used.
  Index lambda_max_index = 0;
};

// Index n with lambda(w) = lambda_n. Raises ProvenanceError when the provenance of p
// does not match the structure of sp.
Index assign_lambda(const PartitionPoint& p, const SectorPartition& sp);
// Fills lambda_index of every point of sp.
void assign_lambdas(SectorPartition& sp);

// Assigns lambda(w), then builds the family. Raises ProvenanceError unless |lambda_n|
// strictly increases over the indices in use.
DiskFamily build_family(SectorPartition& sp, const ComplexSequence& seq);
// Family from explicit centers, all with radius c0.
DiskFamily family_from_centers(const std::vector<Complex>& translated, double c0);

struct DisjointReport {
  bool disjoint = true;
  std::size_t disks = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double min_distance = 0.0;
  double margin = 0.0;  // min_distance - 2 c0
  std::string method;   // "exhaustive" or "grid"
  std::optional<LemmaReport> lemmas;
};

// Exact closest pair. Exhaustive for up to exhaustive_limit disks, otherwise a uniform
// grid whose cell size doubles until the closest pair is certified.
DisjointReport check_disjoint(const DiskFamily& fam, std::size_t exhaustive_limit = 20000);
// Same, plus the lemma inequalities 4.1-4.4 and 4.6 on the partition behind fam.
DisjointReport check_disjoint(const DiskFamily& fam, const SectorPartition& sp, const ComplexSequence& seq,
                              double margin = kStrictMargin);

LemmaReport check_disk_lemmas(const DiskFamily& fam, const SectorPartition& sp, const ComplexSequence& seq,
                              double margin = kStrictMargin);

nlohmann::json to_json(const DisjointReport& r);
nlohmann::json family_summary_json(const DiskFamily& fam);

}  // namespace hcv
