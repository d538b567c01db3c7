#include "hcv/decompose.hpp"

#include <string>

#include "hcv/error.hpp"

namespace hcv {
namespace {

constexpr Index kMaxDecomposable = 100'000'000'000'000'000;  // 1e17

Index pow10(int e) {
  Index v = 1;
  for (int i = 0; i < e; ++i) v *= 10;
  return v;
}

}  // namespace

Index lemma81_offset(int nu, int k) {
  if (nu < 2 || k < 1 || k > nu || nu > 17) {
    raise(ErrorKind::DomainError, "lemma81_offset: invalid (nu, k) = (" + std::to_string(nu) + ", " +
                                      std::to_string(k) + ")");
  }
  // 81 * offset = 100 (10^(nu-1) - 1) - 90 nu + 90 * 10^(k-1)
  const Index num = Index{100} * (pow10(nu - 1) - 1) - Index{90} * nu + Index{90} * pow10(k - 1);
  if (num % 81 != 0) raise(ErrorKind::DomainError, "lemma81_offset: non-integral offset");
  return static_cast<Index>(num / 81);
}

Lemma81Triple decompose_lemma81(Index n) {
  if (n < 11) raise(ErrorKind::DomainError, "decompose_lemma81 requires n >= 11, got " + std::to_string(n));
  if (n > kMaxDecomposable) raise(ErrorKind::DomainError, "decompose_lemma81: n too large");
  for (int nu = 2;; ++nu) {
    for (int k = 1; k <= nu; ++k) {
      const Index off = lemma81_offset(nu, k);
      const Index len = pow10(k);
      if (n > off && n <= off + len) return {nu, k, n - off};
    }
  }
}

Index recompose_lemma81(const Lemma81Triple& t) {
  if (t.j < 1 || t.k < 1 || t.k > t.nu || t.j > pow10(t.k)) {
    raise(ErrorKind::DomainError, "recompose_lemma81: triple out of range");
  }
  return lemma81_offset(t.nu, t.k) + t.j;
}

}  // namespace hcv
