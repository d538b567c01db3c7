#pragma once

#include "hcv/types.hpp"

namespace hcv {

struct Lemma81Triple {
  int nu = 0;
  int k = 0;
  Index j = 0;

  friend bool operator==(const Lemma81Triple&, const Lemma81Triple&) = default;
};

// First index of the (nu, k) block minus one, so that n = block_offset(nu, k) + j.
// Exact integer form of (10/9)((10/9)(10^(nu-1) - 1) - nu + 10^(k-1)).
Index lemma81_offset(int nu, int k);

// Unique (nu, k, j) with nu >= 2, 1 <= k <= nu, 1 <= j <= 10^k. DomainError for n < 11.
Lemma81Triple decompose_lemma81(Index n);
Index recompose_lemma81(const Lemma81Triple& t);

}  // namespace hcv
