#pragma once

#include <set>
#include <string>
#include <vector>

#include "hcv/partition.hpp"

namespace hcv::detail {

// Theta values (index >= 1) of every partition built so far, for the almost-disjoint rule.
class ThetaRegistry {
 public:
  explicit ThetaRegistry(double tol = kBoundaryTol) : tol_(tol) {}

  bool collides(double theta) const;
  void add(const ThetaPartition& tp);
  // Nudges entries of tp that coincide with registered values upward inside their (I) slack.
  // Returns the number of entries it could not separate.
  std::size_t separate(ThetaPartition& tp, double thetaT) const;

 private:
  double tol_;
  std::set<double> values_;
};

}  // namespace hcv::detail
