#pragma once

#include <cstdint>
#include <vector>

namespace mnlb {

/// Per-item offer counters of one trajectory: n_raw[i-1] counts rounds with i in the offered
/// set, n_padded[i-1] rounds with i in its size-K padding.
struct OfferCounts {
  std::vector<std::int64_t> n_raw;
  std::vector<std::int64_t> n_padded;

  static OfferCounts zeros(int n_items) {
    const auto n = static_cast<std::size_t>(n_items);
    return {std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
  }

  bool operator==(const OfferCounts&) const = default;
};

}  // namespace mnlb
