#include "mnlb/errors.hpp"

namespace mnlb {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_instance: return "invalid-instance";
    case ErrorKind::invalid_assortment: return "invalid-assortment";
    case ErrorKind::capacity_violation: return "capacity-violation";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::domain: return "domain";
    case ErrorKind::applicability: return "applicability";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace mnlb
