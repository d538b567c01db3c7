#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "hcv/error.hpp"
#include "hcv/examples.hpp"
#include "hcv/json_util.hpp"
#include "hcv/sequence.hpp"

namespace hcv {

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
  raise(ErrorKind::ConfigError, "expected a complex number as x, [re, im] or {re, im}, got " + j.dump());
}

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::vector<Complex> complex_list_from_json(const nlohmann::json& j) {
  if (!j.is_array()) raise(ErrorKind::ConfigError, "expected an array of complex numbers");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

nlohmann::json complex_list_to_json(const std::vector<Complex>& zs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& z : zs) out.push_back(complex_to_json(z));
  return out;
}

nlohmann::json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  raise(ErrorKind::ConfigError, "expected a real number, got " + j.dump());
}

ComplexSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) raise(ErrorKind::ConfigError, "sequence spec needs a \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto num = [&](const char* key, double fallback) {
    return params.contains(key) ? real_from_json(params.at(key)) : fallback;
  };

  if (kind == "polynomial") {
    if (!params.contains("coefficients")) raise(ErrorKind::ConfigError, "polynomial needs params.coefficients");
    return ComplexSequence::polynomial(complex_list_from_json(params.at("coefficients")));
  }
  if (kind == "exp_power") {
    const double c = num("exponent", 1.0);
    if (params.contains("base")) return ComplexSequence::power_of(real_from_json(params.at("base")), c);
    const Complex rate = params.contains("rate") ? complex_from_json(params.at("rate")) : Complex(1.0);
    return ComplexSequence::exp_power(c, rate);
  }
  if (kind == "log_form") {
    return ComplexSequence::log_form(num("scale", 1.0), num("power", 1.0), num("beta", 1.0), num("shift", 1.0));
  }
  if (kind == "interleaved") {
    if (!params.contains("odd") && !params.contains("even")) return make_example(ExampleClass::Class3);
    const Complex head = params.contains("head") ? complex_from_json(params.at("head")) : Complex(1.0);
    return ComplexSequence::interleaved(sequence_from_json(params.at("odd")), sequence_from_json(params.at("even")),
                                        head);
  }
  if (kind == "class2_inductive" || kind == "class2") return ComplexSequence::class2_inductive();
  if (kind == "class4_base10" || kind == "class4") return ComplexSequence::class4_base10();
  if (kind == "class3") return make_example(ExampleClass::Class3);
  if (kind == "explicit_list") {
    const auto& values = params.is_array() ? params : params.at("values");
    return ComplexSequence::explicit_list(complex_list_from_json(values));
  }
  raise(ErrorKind::ConfigError, "unknown sequence kind \"" + kind + "\"");
}

namespace {

std::string strip(std::string s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) raise(ErrorKind::ConfigError, "cannot parse number in \"" + whole + "\"");
  return v;
}

// Terms like 3n^2, n, -2.5, separated by + or -.
std::vector<Complex> parse_poly(const std::string& body, const std::string& whole) {
  std::vector<Complex> coeffs;
  std::size_t i = 0;
  while (i < body.size()) {
    std::size_t j = i + 1;
    while (j < body.size() && body[j] != '+' && !(body[j] == '-' && body[j - 1] != '^' && body[j - 1] != 'e')) ++j;
    std::string term = body.substr(i, j - i);
    i = j;
    if (!term.empty() && term[0] == '+') term.erase(0, 1);
    double sign = 1.0;
    if (!term.empty() && term[0] == '-') {
      sign = -1.0;
      term.erase(0, 1);
    }
    std::size_t power = 0;
    double coef = 1.0;
    const auto npos = term.find('n');
    if (npos == std::string::npos) {
      coef = parse_number(term, whole);
    } else {
      std::string c = term.substr(0, npos);
      if (!c.empty() && c.back() == '*') c.pop_back();
      if (!c.empty()) coef = parse_number(c, whole);
      power = 1;
      const std::string rest = term.substr(npos + 1);
      if (!rest.empty()) {
        if (rest[0] != '^') raise(ErrorKind::ConfigError, "bad polynomial term in \"" + whole + "\"");
        const double p = parse_number(rest.substr(1), whole);
        if (p < 0 || p != std::floor(p)) raise(ErrorKind::ConfigError, "polynomial powers must be integers");
        power = static_cast<std::size_t>(p);
      }
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1);
    coeffs[power] += sign * coef;
  }
  return coeffs;
}

}  // namespace

ComplexSequence sequence_from_string(const std::string& text) {
  const std::string s = strip(text);
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : s.substr(colon + 1);

  if (head == "poly" || head == "polynomial") {
    if (body.empty()) raise(ErrorKind::ConfigError, "poly: needs a polynomial in n");
    return ComplexSequence::polynomial(parse_poly(body, text));
  }
  if (head == "exp") {
    if (body == "n") return ComplexSequence::exp_power(1.0);
    if (body == "sqrt(n)") return ComplexSequence::exp_power(0.5);
    if (body.rfind("n^", 0) == 0) return ComplexSequence::exp_power(parse_number(body.substr(2), text));
    raise(ErrorKind::ConfigError, "exp: expects n, sqrt(n) or n^c in \"" + text + "\"");
  }
  if (head == "pow") return ComplexSequence::power_of(body.empty() ? 2.0 : parse_number(body, text));
  if (head == "nlog") return ComplexSequence::log_form(body.empty() ? 1.0 : parse_number(body, text), 1.0, 1.0, 1.0);
  if (head == "class1") {
    return make_example(ExampleClass::Class1, {{"exponent", body.empty() ? 0.5 : parse_number(body, text)}});
  }
  if (head == "class2") return make_example(ExampleClass::Class2);
  if (head == "class3") return make_example(ExampleClass::Class3);
  if (head == "class4") return make_example(ExampleClass::Class4);
  if (!s.empty() && s.front() == '{') {
    try {
      return sequence_from_json(nlohmann::json::parse(s));
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::ConfigError, std::string("sequence JSON: ") + e.what());
    }
  }
  raise(ErrorKind::ConfigError, "unrecognised sequence \"" + text + "\"");
}

}  // namespace hcv
