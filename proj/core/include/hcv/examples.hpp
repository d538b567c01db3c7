#pragma once

#include <nlohmann/json.hpp>

#include "hcv/sequence.hpp"

namespace hcv {

enum class ExampleClass { Class1, Class2, Class3, Class4 };

// Example growth sequences.
//   Class1: {"coefficients": [...]} for a polynomial p(n) (default p(n) = n), or
//           {"exponent": c} with 0 < c < 1 for exp(n^c).
//   Class2: the inductive square-then-run rule from lambda_1 = 1.
//   Class3: lambda_{2n+1} = n, lambda_{2n} = 2^n, lambda_1 = 1.
//   Class4: (1 + 1/k)^((nu - k + 1) 10^k + j) for n >= 11 and lambda_n = n below.
ComplexSequence make_example(ExampleClass cls, const nlohmann::json& params = nlohmann::json::object());

}  // namespace hcv
