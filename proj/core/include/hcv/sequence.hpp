#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/types.hpp"

namespace hcv {

enum class SequenceKind {
  Polynomial,
  ExpPower,
  LogForm,
  Interleaved,
  Class2Inductive,
  Class4Base10,
  ExplicitList,
  Custom,
};

std::string to_string(SequenceKind kind);

// Hard cap on 1-based indices accepted by eval.
inline constexpr Index kDefaultIndexCap = Index{1} << 52;

// Immutable view of a growth sequence n -> lambda_n. Copies share the memo.
class ComplexSequence {
 public:
  using Generator = std::function<Complex(Index)>;
  using LogModulus = std::function<double(Index)>;

  // lambda_n = sum_k coeffs[k] n^k
  static ComplexSequence polynomial(std::vector<Complex> coeffs);
  // lambda_n = exp(rate * n^exponent)
  static ComplexSequence exp_power(double exponent, Complex rate = 1.0);
  // lambda_n = base^(n^exponent), evaluated with pow so integer powers of 2 stay exact
  static ComplexSequence power_of(double base, double exponent = 1.0);
  // lambda_n = scale * n^power * log(n + shift)^beta
  static ComplexSequence log_form(double scale, double power, double beta, double shift = 1.0);
  // lambda_1 = head, lambda_{2t} = even(t), lambda_{2t+1} = odd(t)
  static ComplexSequence interleaved(ComplexSequence odd, ComplexSequence even, Complex head = 1.0);
  static ComplexSequence class2_inductive();
  static ComplexSequence class4_base10();
  static ComplexSequence explicit_list(std::vector<Complex> values);
  static ComplexSequence custom(std::string label, Generator gen, LogModulus log_mod = {});
  // mu_n = base(index_map(n)); index_map must be strictly increasing
  static ComplexSequence subsequence(ComplexSequence base, std::function<Index(Index)> index_map,
                                     std::string label);

  // lambda_n, memoized. Raises ZeroTerm, OutOfBudget, NonFinite, DomainError.
  Complex eval(Index n) const;
  // |lambda_n|; +inf when the value overflows but its logarithm is known.
  double modulus(Index n) const;
  // log |lambda_n|, available even when the value itself overflows.
  double log_modulus(Index n) const;
  // |lambda_{n+1}| / |lambda_n| computed without overflow.
  double ratio(Index n) const;

  SequenceKind kind() const;
  const std::string& label() const;
  // Serializable form {"kind":..., "params":...}; null for custom generators.
  const nlohmann::json& spec() const;
  // Largest index accepted; explicit lists are bounded by their length.
  Index max_index() const;
  ComplexSequence with_index_cap(Index cap) const;

  std::size_t cached_count() const;

 public:
  struct Impl;  // implementation detail

 private:
  explicit ComplexSequence(std::shared_ptr<Impl> impl);
  std::shared_ptr<Impl> impl_;
};

// Parses {"kind": "...", "params": {...}} as described in the README.
ComplexSequence sequence_from_json(const nlohmann::json& j);
// Mini syntax used by the CLI: "poly:n^2", "poly:3n", "exp:n", "exp:n^0.5",
// "nlog:1.5", "class2", "class3", "class4".
ComplexSequence sequence_from_string(const std::string& text);

}  // namespace hcv
