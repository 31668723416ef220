#include "mnlb/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mnlb {

AuditCheck& AuditReport::push(AuditCheck check) {
  check.pass = check.margin >= -check.slack;
  checks_.push_back(std::move(check));
  return checks_.back();
}

AuditCheck& AuditReport::add_upper(std::string name, double exact, double bound, std::string note) {
  return push({std::move(name), exact, bound, bound - exact, false, std::move(note)});
}

AuditCheck& AuditReport::add_lower(std::string name, double exact, double bound, std::string note) {
  return push({std::move(name), exact, bound, exact - bound, false, std::move(note)});
}

AuditCheck& AuditReport::add_equal(std::string name, double exact, double bound, double tolerance,
                                   std::string note) {
  // The tolerance is the whole allowance, so no extra slack below zero.
  return push({std::move(name), exact, bound, tolerance - std::abs(exact - bound), false,
               std::move(note), 0.0});
}

AuditCheck& AuditReport::add_exact(std::string name, double exact, double bound, bool holds,
                                   std::string note) {
  return push({std::move(name), exact, bound, holds ? 0.0 : -1.0, false, std::move(note)});
}

void AuditReport::append(const AuditReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool AuditReport::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const AuditCheck& c) { return c.pass; });
}

std::optional<AuditCheck> AuditReport::find(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

double AuditReport::min_margin() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : checks_) m = std::min(m, c.margin);
  return m;
}

}  // namespace mnlb
