#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcv {

enum class ErrorKind {
  ZeroTerm,
  OutOfBudget,
  NonFinite,
  DomainError,
  NotFound,
  ProvenanceError,
  NonTermination,
  DegenerateTarget,
  OutsideSector,
  InsufficientCoverage,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace hcv
