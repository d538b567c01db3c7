#include "hcv/error.hpp"

namespace hcv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroTerm: return "ZeroTerm";
    case ErrorKind::OutOfBudget: return "OutOfBudget";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ProvenanceError: return "ProvenanceError";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::DegenerateTarget: return "DegenerateTarget";
    case ErrorKind::OutsideSector: return "OutsideSector";
    case ErrorKind::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hcv
