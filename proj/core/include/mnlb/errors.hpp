#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mnlb {

enum class ErrorKind {
  invalid_instance,
  invalid_assortment,
  capacity_violation,
  too_large,
  domain,
  applicability,
  protocol,
  config,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mnlb
