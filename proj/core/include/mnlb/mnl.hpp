#pragma once

// Capacitated multinomial-logit choice environment.
//
// Items are numbered 1..N. The outside option (no purchase) has weight 1 and is
// represented by an empty Outcome, never by an item id.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnlb/rng.hpp"

namespace mnlb {

using ItemId = int;

/// Result of one customer visit: the purchased item, or no purchase.
using Outcome = std::optional<ItemId>;
inline constexpr Outcome kNoPurchase = std::nullopt;

/// Sorted set of distinct item ids. Range and capacity are checked against an instance.
class Assortment {
 public:
  Assortment() = default;

  /// Sorts the ids. Throws invalid_assortment on duplicates or ids < 1.
  explicit Assortment(std::vector<ItemId> items);
  Assortment(std::initializer_list<ItemId> items);

  /// Items 1..k.
  static Assortment first(int k);

  std::span<const ItemId> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  bool contains(ItemId id) const noexcept;
  ItemId max_item() const noexcept { return items_.empty() ? 0 : items_.back(); }

  std::size_t overlap(const Assortment& other) const noexcept;

  /// "1 2 5" style rendering; "{}" never appears, the empty set renders as "".
  std::string to_string() const;

  auto operator<=>(const Assortment&) const = default;

 private:
  std::vector<ItemId> items_;
};

class MnlInstance {
 public:
  /// Throws invalid_instance unless N >= 1, 1 <= K <= N, every r in (0, 1] and every v > 0.
  MnlInstance(int capacity, std::vector<double> revenues, std::vector<double> preferences);

  int n_items() const noexcept { return static_cast<int>(revenues_.size()); }
  int capacity() const noexcept { return capacity_; }
  std::span<const double> revenues() const noexcept { return revenues_; }
  std::span<const double> preferences() const noexcept { return preferences_; }
  double revenue(ItemId id) const { return revenues_.at(static_cast<std::size_t>(id - 1)); }
  double preference(ItemId id) const { return preferences_.at(static_cast<std::size_t>(id - 1)); }
  bool uniform_revenues() const noexcept;

  /// Throws invalid_assortment (id > N) or capacity_violation (|s| > K).
  void validate(const Assortment& s) const;

 private:
  int capacity_;
  std::vector<double> revenues_;
  std::vector<double> preferences_;
};

/// Purchase law over {no purchase} followed by the offered items in increasing id order.
class ChoiceDistribution {
 public:
  struct Entry {
    Outcome outcome;
    double probability;
  };

  /// Checks positivity and normalization (1e-12) and throws domain otherwise.
  explicit ChoiceDistribution(std::vector<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  /// Zero for outcomes outside the support.
  double probability(Outcome outcome) const noexcept;
  std::vector<double> probabilities() const;

 private:
  std::vector<Entry> entries_;
};

ChoiceDistribution choice_distribution(const MnlInstance& instance, const Assortment& s);

/// Expected revenue R(s), accumulated as sum of r_j * P(j) so it agrees bit-for-bit with
/// the choice distribution.
double expected_revenue(const MnlInstance& instance, const Assortment& s);

Outcome sample_choice(const ChoiceDistribution& dist, Rng& rng);

struct OptimalAssortment {
  Assortment assortment;
  double value = 0.0;
};

inline constexpr int kEnumerationLimit = 25;

/// Maximizer of expected revenue over all assortments of size <= K, lexicographically
/// smallest among ties. Uniform revenues use the exact top-K-by-weight rule at any N;
/// otherwise all subsets are enumerated and N > kEnumerationLimit throws too_large.
OptimalAssortment best_assortment(const MnlInstance& instance);

/// Same enumeration over arbitrary nonnegative weights (used for optimistic indices).
/// `weights` may not contain infinities.
OptimalAssortment best_assortment(std::span<const double> revenues,
                                  std::span<const double> weights, int capacity);

/// R(S*) - R(s) >= 0, evaluated as one fraction with compensated sums so that equal
/// assortments give exactly 0 and closed-form gaps are reproduced to the last bit.
double instantaneous_regret(const MnlInstance& instance, const Assortment& s);
double instantaneous_regret(const MnlInstance& instance, const OptimalAssortment& best,
                            const Assortment& s);

}  // namespace mnlb
