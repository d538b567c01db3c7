#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/types.hpp"

namespace hcv {

// p(z) = sum_k coeffs[k] z^k
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);

  Complex operator()(Complex z) const;
  Polynomial derivative() const;
  // -1 for the zero polynomial.
  int degree() const;
  const std::vector<Complex>& coefficients() const { return c_; }

  static Polynomial identity() { return Polynomial({Complex{0.0}, Complex{1.0}}); }
  static Polynomial constant(Complex v) { return Polynomial({v}); }

 private:
  std::vector<Complex> c_;
};

nlohmann::json to_json(const Polynomial& p);
// Accepts [[re, im], ...], [number, ...] or {"coefficients": [...]}.
Polynomial polynomial_from_json(const nlohmann::json& j);

// Background function g on B: zero, exp, sin, cos or a polynomial.
class EntireFunction {
 public:
  enum class Kind { Zero, Exp, Sin, Cos, Polynomial };

  EntireFunction() = default;
  static EntireFunction zero() { return {}; }
  static EntireFunction builtin(Kind k);
  static EntireFunction polynomial(Polynomial p);

  Complex operator()(Complex z) const;
  Kind kind() const { return kind_; }
  const Polynomial& poly() const { return poly_; }
  std::string name() const;

 private:
  Kind kind_ = Kind::Zero;
  Polynomial poly_;
};

nlohmann::json to_json(const EntireFunction& g);
// "zero", "exp", "sin", "cos", or a polynomial coefficient list.
EntireFunction entire_from_json(const nlohmann::json& j);

}  // namespace hcv
