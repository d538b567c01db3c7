#include "hcv/sequence.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "hcv/decompose.hpp"
#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

namespace {
constexpr std::size_t kMemoLimit = std::size_t{1} << 20;
}

struct ComplexSequence::Impl {
  SequenceKind kind = SequenceKind::Custom;
  std::string label;
  nlohmann::json spec;
  Generator gen;
  LogModulus log_mod;
  Index cap = kDefaultIndexCap;

  mutable std::shared_mutex mu;
  mutable std::unordered_map<Index, Complex> memo;
};

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::Polynomial: return "polynomial";
    case SequenceKind::ExpPower: return "exp_power";
    case SequenceKind::LogForm: return "log_form";
    case SequenceKind::Interleaved: return "interleaved";
    case SequenceKind::Class2Inductive: return "class2_inductive";
    case SequenceKind::Class4Base10: return "class4_base10";
    case SequenceKind::ExplicitList: return "explicit_list";
    case SequenceKind::Custom: return "custom";
  }
  return "custom";
}

ComplexSequence::ComplexSequence(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

namespace {

std::shared_ptr<ComplexSequence::Impl> make_impl(SequenceKind kind, std::string label, nlohmann::json spec,
                                                  ComplexSequence::Generator gen,
                                                  ComplexSequence::LogModulus log_mod = {}) {
  auto impl = std::make_shared<ComplexSequence::Impl>();
  impl->kind = kind;
  impl->label = std::move(label);
  impl->spec = std::move(spec);
  impl->gen = std::move(gen);
  impl->log_mod = std::move(log_mod);
  return impl;
}

void check_index(Index n, Index cap) {
  if (n < 1) raise(ErrorKind::DomainError, "sequence indices are 1-based, got " + std::to_string(n));
  if (n > cap) {
    raise(ErrorKind::OutOfBudget,
          "index " + std::to_string(n) + " exceeds the hard cap " + std::to_string(cap));
  }
}

}  // namespace

ComplexSequence ComplexSequence::polynomial(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex{}) coeffs.pop_back();
  if (coeffs.empty()) raise(ErrorKind::DomainError, "polynomial sequence needs a nonzero coefficient");
  nlohmann::json spec = {{"kind", "polynomial"}, {"params", {{"coefficients", complex_list_to_json(coeffs)}}}};
  auto gen = [coeffs](Index n) {
    const double x = static_cast<double>(n);
    Complex acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  return ComplexSequence(make_impl(SequenceKind::Polynomial, "polynomial", std::move(spec), gen));
}

ComplexSequence ComplexSequence::exp_power(double exponent, Complex rate) {
  if (!(exponent > 0.0)) raise(ErrorKind::DomainError, "exp_power exponent must be positive");
  nlohmann::json spec = {{"kind", "exp_power"},
                         {"params", {{"exponent", exponent}, {"rate", complex_to_json(rate)}}}};
  auto gen = [exponent, rate](Index n) { return std::exp(rate * std::pow(static_cast<double>(n), exponent)); };
  auto log_mod = [exponent, rate](Index n) { return rate.real() * std::pow(static_cast<double>(n), exponent); };
  return ComplexSequence(make_impl(SequenceKind::ExpPower, "exp_power", std::move(spec), gen, log_mod));
}

ComplexSequence ComplexSequence::power_of(double base, double exponent) {
  if (!(base > 0.0) || !(exponent > 0.0)) raise(ErrorKind::DomainError, "power_of needs base > 0, exponent > 0");
  nlohmann::json spec = {{"kind", "exp_power"}, {"params", {{"exponent", exponent}, {"base", base}}}};
  auto gen = [base, exponent](Index n) {
    return Complex(std::pow(base, std::pow(static_cast<double>(n), exponent)), 0.0);
  };
  auto log_mod = [base, exponent](Index n) { return std::pow(static_cast<double>(n), exponent) * std::log(base); };
  return ComplexSequence(make_impl(SequenceKind::ExpPower, "power_of", std::move(spec), gen, log_mod));
}

ComplexSequence ComplexSequence::log_form(double scale, double power, double beta, double shift) {
  if (!(scale != 0.0)) raise(ErrorKind::DomainError, "log_form scale must be nonzero");
  nlohmann::json spec = {{"kind", "log_form"},
                         {"params", {{"scale", scale}, {"power", power}, {"beta", beta}, {"shift", shift}}}};
  auto gen = [scale, power, beta, shift](Index n) {
    const double x = static_cast<double>(n);
    const Complex lg = std::log(Complex(x + shift, 0.0));
    return scale * std::pow(x, power) * std::pow(lg, beta);
  };
  auto log_mod = [scale, power, beta, shift](Index n) {
    const double x = static_cast<double>(n);
    return std::log(std::abs(scale)) + power * std::log(x) + beta * std::log(std::abs(std::log(x + shift)));
  };
  return ComplexSequence(make_impl(SequenceKind::LogForm, "log_form", std::move(spec), gen, log_mod));
}

ComplexSequence ComplexSequence::interleaved(ComplexSequence odd, ComplexSequence even, Complex head) {
  nlohmann::json spec = {{"kind", "interleaved"},
                         {"params", {{"odd", odd.spec()}, {"even", even.spec()}, {"head", complex_to_json(head)}}}};
  auto gen = [odd, even, head](Index n) -> Complex {
    if (n == 1) return head;
    return n % 2 == 0 ? even.eval(n / 2) : odd.eval((n - 1) / 2);
  };
  auto log_mod = [odd, even, head](Index n) -> double {
    if (n == 1) return std::log(std::abs(head));
    return n % 2 == 0 ? even.log_modulus(n / 2) : odd.log_modulus((n - 1) / 2);
  };
  return ComplexSequence(make_impl(SequenceKind::Interleaved, "interleaved", std::move(spec), gen, log_mod));
}

ComplexSequence ComplexSequence::class2_inductive() {
  nlohmann::json spec = {{"kind", "class2_inductive"}, {"params", nlohmann::json::object()}};
  // lambda_1 = 1; the run after a square b^2 lists b, b+1, ..., (b+1)^2 (length b^2+b+2),
  // and its last entry (b+1)^2 starts the next run.
  auto gen = [](Index n) -> Complex {
    if (n == 1) return 1.0;
    Index pos = n - 2;
    Index b = 1;
    while (pos >= b * b + b + 2) {
      pos -= b * b + b + 2;
      ++b;
    }
    return static_cast<double>(b + pos);
  };
  return ComplexSequence(make_impl(SequenceKind::Class2Inductive, "class2", std::move(spec), gen));
}

ComplexSequence ComplexSequence::class4_base10() {
  nlohmann::json spec = {{"kind", "class4_base10"}, {"params", nlohmann::json::object()}};
  auto exponent = [](Index n, int& k) {
    const Lemma81Triple t = decompose_lemma81(n);
    k = t.k;
    Index p = 1;
    for (int i = 0; i < t.k; ++i) p *= 10;
    return static_cast<double>((t.nu - t.k + 1) * p + t.j);
  };
  auto gen = [exponent](Index n) -> Complex {
    if (n <= 10) return static_cast<double>(n);
    int k = 0;
    const double e = exponent(n, k);
    if (k == 1) return std::ldexp(1.0, static_cast<int>(std::min(e, 4096.0)));
    return std::pow(1.0 + 1.0 / k, e);
  };
  auto log_mod = [exponent](Index n) -> double {
    if (n <= 10) return std::log(static_cast<double>(n));
    int k = 0;
    const double e = exponent(n, k);
    return e * std::log1p(1.0 / k);
  };
  return ComplexSequence(make_impl(SequenceKind::Class4Base10, "class4", std::move(spec), gen, log_mod));
}

ComplexSequence ComplexSequence::explicit_list(std::vector<Complex> values) {
  nlohmann::json spec = {{"kind", "explicit_list"}, {"params", {{"values", complex_list_to_json(values)}}}};
  const Index len = static_cast<Index>(values.size());
  auto gen = [values = std::move(values)](Index n) { return values[static_cast<std::size_t>(n - 1)]; };
  auto impl = make_impl(SequenceKind::ExplicitList, "explicit_list", std::move(spec), gen);
  impl->cap = len;
  return ComplexSequence(std::move(impl));
}

ComplexSequence ComplexSequence::custom(std::string label, Generator gen, LogModulus log_mod) {
  return ComplexSequence(
      make_impl(SequenceKind::Custom, std::move(label), nlohmann::json(), std::move(gen), std::move(log_mod)));
}

ComplexSequence ComplexSequence::subsequence(ComplexSequence base, std::function<Index(Index)> index_map,
                                             std::string label) {
  auto gen = [base, index_map](Index n) { return base.eval(index_map(n)); };
  auto log_mod = [base, index_map](Index n) { return base.log_modulus(index_map(n)); };
  return ComplexSequence(make_impl(SequenceKind::Custom, std::move(label), nlohmann::json(), gen, log_mod));
}

Complex ComplexSequence::eval(Index n) const {
  check_index(n, impl_->cap);
  {
    std::shared_lock lock(impl_->mu);
    if (auto it = impl_->memo.find(n); it != impl_->memo.end()) return it->second;
  }
  const Complex v = impl_->gen(n);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    raise(ErrorKind::NonFinite, impl_->label + ": lambda_" + std::to_string(n) + " is not finite in double");
  }
  if (v == Complex{}) raise(ErrorKind::ZeroTerm, impl_->label + ": lambda_" + std::to_string(n) + " = 0");
  std::unique_lock lock(impl_->mu);
  if (impl_->memo.size() < kMemoLimit) impl_->memo.emplace(n, v);
  return v;
}

double ComplexSequence::modulus(Index n) const {
  try {
    return std::abs(eval(n));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonFinite || !impl_->log_mod) throw;
    return std::exp(impl_->log_mod(n));
  }
}

double ComplexSequence::log_modulus(Index n) const {
  check_index(n, impl_->cap);
  if (impl_->log_mod) {
    const double lm = impl_->log_mod(n);
    if (lm == -HUGE_VAL) raise(ErrorKind::ZeroTerm, impl_->label + ": lambda_" + std::to_string(n) + " = 0");
    return lm;
  }
  return std::log(std::abs(eval(n)));
}

double ComplexSequence::ratio(Index n) const {
  const double a = modulus(n);
  const double b = modulus(n + 1);
  if (std::isfinite(a) && std::isfinite(b) && a > 0.0) return b / a;
  return std::exp(log_modulus(n + 1) - log_modulus(n));
}

SequenceKind ComplexSequence::kind() const { return impl_->kind; }
const std::string& ComplexSequence::label() const { return impl_->label; }
const nlohmann::json& ComplexSequence::spec() const { return impl_->spec; }
Index ComplexSequence::max_index() const { return impl_->cap; }

ComplexSequence ComplexSequence::with_index_cap(Index cap) const {
  auto impl = make_impl(impl_->kind, impl_->label, impl_->spec, impl_->gen, impl_->log_mod);
  impl->cap = std::min(cap, impl_->cap);
  return ComplexSequence(std::move(impl));
}

std::size_t ComplexSequence::cached_count() const {
  std::shared_lock lock(impl_->mu);
  return impl_->memo.size();
}

}  // namespace hcv
