#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mnlb {

/// Default rounding allowance: margins below -kAuditTolerance fail.
inline constexpr double kAuditTolerance = 1e-12;

struct AuditCheck {
  std::string name;
  double exact = 0.0;
  double bound = 0.0;
  /// Signed slack: positive means the inequality holds with room to spare.
  double margin = 0.0;
  bool pass = false;
  std::string note;
  /// Rows pass when margin >= -slack; equality rows carry their tolerance in the margin.
  double slack = kAuditTolerance;
};

/// Ordered list of numeric certificates. Each row records the computed quantity, the
/// value it is claimed to respect, and the signed margin, so a failure points at one line.
class AuditReport {
 public:
  AuditReport() = default;
  explicit AuditReport(std::string title) : title_(std::move(title)) {}

  /// exact <= bound
  AuditCheck& add_upper(std::string name, double exact, double bound, std::string note = {});
  /// exact >= bound
  AuditCheck& add_lower(std::string name, double exact, double bound, std::string note = {});
  /// |exact - bound| <= tolerance
  AuditCheck& add_equal(std::string name, double exact, double bound, double tolerance,
                        std::string note = {});
  /// Boolean certificate computed elsewhere (e.g. exact integer arithmetic).
  AuditCheck& add_exact(std::string name, double exact, double bound, bool holds,
                        std::string note = {});

  /// Adds a prepared row; its pass flag is recomputed from the margin.
  AuditCheck& add_row(AuditCheck check) { return push(std::move(check)); }

  void append(const AuditReport& other);

  const std::string& title() const noexcept { return title_; }
  const std::vector<AuditCheck>& checks() const noexcept { return checks_; }
  bool empty() const noexcept { return checks_.empty(); }
  bool passed() const noexcept;
  std::optional<AuditCheck> find(const std::string& name) const;
  /// Smallest margin over all rows; +inf when empty.
  double min_margin() const noexcept;

 private:
  AuditCheck& push(AuditCheck check);

  std::string title_;
  std::vector<AuditCheck> checks_;
};

}  // namespace mnlb
