#include "hcv/polynomial.hpp"

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

Polynomial::Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

int Polynomial::degree() const { return static_cast<int>(c_.size()) - 1; }

nlohmann::json to_json(const Polynomial& p) { return complex_list_to_json(p.coefficients()); }

Polynomial polynomial_from_json(const nlohmann::json& j) {
  if (j.is_object()) {
    if (!j.contains("coefficients")) raise(ErrorKind::ConfigError, "polynomial object needs \"coefficients\"");
    return polynomial_from_json(j.at("coefficients"));
  }
  if (!j.is_array()) raise(ErrorKind::ConfigError, "polynomial must be a coefficient array");
  return Polynomial(complex_list_from_json(j));
}

EntireFunction EntireFunction::builtin(Kind k) {
  if (k == Kind::Polynomial) raise(ErrorKind::ConfigError, "use EntireFunction::polynomial");
  EntireFunction g;
  g.kind_ = k;
  return g;
}

EntireFunction EntireFunction::polynomial(Polynomial p) {
  EntireFunction g;
  g.kind_ = Kind::Polynomial;
  g.poly_ = std::move(p);
  return g;
}

Complex EntireFunction::operator()(Complex z) const {
  switch (kind_) {
    case Kind::Zero: return {};
    case Kind::Exp: return std::exp(z);
    case Kind::Sin: return std::sin(z);
    case Kind::Cos: return std::cos(z);
    case Kind::Polynomial: return poly_(z);
  }
  return {};
}

std::string EntireFunction::name() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Exp: return "exp";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Polynomial: return "polynomial";
  }
  return "zero";
}

nlohmann::json to_json(const EntireFunction& g) {
  if (g.kind() == EntireFunction::Kind::Polynomial) return {{"polynomial", to_json(g.poly())}};
  return g.name();
}

EntireFunction entire_from_json(const nlohmann::json& j) {
  if (j.is_null()) return EntireFunction::zero();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "zero" || s == "0") return EntireFunction::zero();
    if (s == "exp") return EntireFunction::builtin(EntireFunction::Kind::Exp);
    if (s == "sin") return EntireFunction::builtin(EntireFunction::Kind::Sin);
    if (s == "cos") return EntireFunction::builtin(EntireFunction::Kind::Cos);
    raise(ErrorKind::ConfigError, "unknown background function \"" + s + "\"");
  }
  if (j.is_object() && j.contains("polynomial")) return EntireFunction::polynomial(polynomial_from_json(j.at("polynomial")));
  return EntireFunction::polynomial(polynomial_from_json(j));
}

}  // namespace hcv
