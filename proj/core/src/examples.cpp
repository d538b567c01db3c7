#include "hcv/examples.hpp"

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

ComplexSequence make_example(ExampleClass cls, const nlohmann::json& params) {
  switch (cls) {
    case ExampleClass::Class1: {
      if (params.contains("exponent")) {
        const double c = real_from_json(params.at("exponent"));
        if (!(c > 0.0 && c < 1.0)) raise(ErrorKind::DomainError, "class1 exp(n^c) needs c in (0, 1)");
        return ComplexSequence::exp_power(c);
      }
      if (params.contains("coefficients")) {
        auto coeffs = complex_list_from_json(params.at("coefficients"));
        bool nonconstant = false;
        for (std::size_t i = 1; i < coeffs.size(); ++i) nonconstant = nonconstant || coeffs[i] != Complex{};
        if (!nonconstant) raise(ErrorKind::DomainError, "class1 polynomial must be non-constant");
        return ComplexSequence::polynomial(std::move(coeffs));
      }
      return ComplexSequence::polynomial({0.0, 1.0});
    }
    case ExampleClass::Class2:
      return ComplexSequence::class2_inductive();
    case ExampleClass::Class3:
      return ComplexSequence::interleaved(ComplexSequence::polynomial({0.0, 1.0}), ComplexSequence::power_of(2.0),
                                          1.0);
    case ExampleClass::Class4:
      return ComplexSequence::class4_base10();
  }
  raise(ErrorKind::DomainError, "unknown example class");
}

}  // namespace hcv
