#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "hcv/types.hpp"

namespace hcv {

// Accepts a number, a [re, im] pair or {"re":..., "im":...}.
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(Complex z);

std::vector<Complex> complex_list_from_json(const nlohmann::json& j);
nlohmann::json complex_list_to_json(const std::vector<Complex>& zs);

// Serializes doubles that may be infinite or NaN, which JSON cannot hold.
nlohmann::json real_to_json(double x);
double real_from_json(const nlohmann::json& j);

}  // namespace hcv
