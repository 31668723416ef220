#include "mnlb/mnl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "compensated.hpp"
#include "mnlb/errors.hpp"

namespace mnlb {

namespace {

constexpr double kNormalizationTol = 1e-12;
// Values are < 1, so incremental sums agreeing to 1e-14 are treated as ties.
constexpr double kTieTol = 1e-14;

std::vector<ItemId> checked_sorted(std::vector<ItemId> items) {
  std::sort(items.begin(), items.end());
  if (!items.empty() && items.front() < 1) {
    throw Error(ErrorKind::invalid_assortment,
                "item id " + std::to_string(items.front()) + " is below 1");
  }
  if (std::adjacent_find(items.begin(), items.end()) != items.end()) {
    throw Error(ErrorKind::invalid_assortment, "duplicate item id in assortment");
  }
  return items;
}

bool all_equal(std::span<const double> xs) {
  return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
}

// Top-K items by weight, smallest id first among equal weights; zero weights are skipped.
Assortment top_by_weight(std::span<const double> weights, int capacity) {
  std::vector<ItemId> order(weights.size());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) {
    return weights[static_cast<std::size_t>(a - 1)] > weights[static_cast<std::size_t>(b - 1)];
  });
  std::vector<ItemId> chosen;
  for (ItemId id : order) {
    if (static_cast<int>(chosen.size()) == capacity) break;
    if (weights[static_cast<std::size_t>(id - 1)] > 0.0) chosen.push_back(id);
  }
  return Assortment(std::move(chosen));
}

struct Enumerator {
  std::span<const double> revenues;
  std::span<const double> weights;
  int capacity;
  std::vector<ItemId> current;
  std::vector<ItemId> best;
  double best_value = -1.0;

  // Visits subsets in lexicographic order of their sorted item lists.
  void visit(std::size_t start, double num, double den) {
    const double value = num / (1.0 + den);
    if (value > best_value + kTieTol) {
      best_value = value;
      best = current;
    }
    if (static_cast<int>(current.size()) == capacity) return;
    for (std::size_t j = start; j < weights.size(); ++j) {
      current.push_back(static_cast<ItemId>(j + 1));
      visit(j + 1, num + revenues[j] * weights[j], den + weights[j]);
      current.pop_back();
    }
  }
};

double weighted_revenue(std::span<const double> revenues, std::span<const double> weights,
                        const Assortment& s) {
  double den = 1.0;
  for (ItemId id : s.items()) den += weights[static_cast<std::size_t>(id - 1)];
  double total = 0.0;
  for (ItemId id : s.items()) {
    const auto k = static_cast<std::size_t>(id - 1);
    total += revenues[k] * (weights[k] / den);
  }
  return total;
}

// Numerator sum r*v and denominator 1 + sum v of R(s), both compensated.
struct RevenueTerms {
  double num;
  double den;
};

RevenueTerms revenue_terms(const MnlInstance& instance, const Assortment& s) {
  detail::CompensatedSum num, weight;
  for (ItemId id : s.items()) {
    num.add(instance.revenue(id) * instance.preference(id));
    weight.add(instance.preference(id));
  }
  return {num.value(), 1.0 + weight.value()};
}

}  // namespace

Assortment::Assortment(std::vector<ItemId> items) : items_(checked_sorted(std::move(items))) {}

Assortment::Assortment(std::initializer_list<ItemId> items)
    : Assortment(std::vector<ItemId>(items)) {}

Assortment Assortment::first(int k) {
  std::vector<ItemId> items(static_cast<std::size_t>(std::max(k, 0)));
  std::iota(items.begin(), items.end(), 1);
  return Assortment(std::move(items));
}

bool Assortment::contains(ItemId id) const noexcept {
  return std::binary_search(items_.begin(), items_.end(), id);
}

std::size_t Assortment::overlap(const Assortment& other) const noexcept {
  std::size_t count = 0;
  for (ItemId id : items_) count += other.contains(id) ? 1 : 0;
  return count;
}

std::string Assortment::to_string() const {
  std::string out;
  for (ItemId id : items_) {
    if (!out.empty()) out += ' ';
    out += std::to_string(id);
  }
  return out;
}

MnlInstance::MnlInstance(int capacity, std::vector<double> revenues,
                         std::vector<double> preferences)
    : capacity_(capacity), revenues_(std::move(revenues)), preferences_(std::move(preferences)) {
  if (revenues_.empty()) throw Error(ErrorKind::invalid_instance, "instance needs N >= 1 items");
  if (revenues_.size() != preferences_.size()) {
    throw Error(ErrorKind::invalid_instance, "revenues and preferences differ in length");
  }
  if (capacity_ < 1 || capacity_ > n_items()) {
    throw Error(ErrorKind::invalid_instance, "capacity must satisfy 1 <= K <= N");
  }
  for (double r : revenues_) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::invalid_instance, "revenue outside (0, 1]");
  }
  for (double v : preferences_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_instance, "preference must be positive and finite");
    }
  }
}

bool MnlInstance::uniform_revenues() const noexcept { return all_equal(revenues_); }

void MnlInstance::validate(const Assortment& s) const {
  if (s.max_item() > n_items()) {
    throw Error(ErrorKind::invalid_assortment,
                "item id " + std::to_string(s.max_item()) + " exceeds N = " +
                    std::to_string(n_items()));
  }
  if (static_cast<int>(s.size()) > capacity_) {
    throw Error(ErrorKind::capacity_violation, "assortment of size " + std::to_string(s.size()) +
                                                   " exceeds K = " + std::to_string(capacity_));
  }
}

ChoiceDistribution::ChoiceDistribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::domain, "empty choice distribution");
  double total = 0.0;
  for (const auto& e : entries_) {
    if (!(e.probability > 0.0 && e.probability <= 1.0)) {
      throw Error(ErrorKind::domain, "choice probabilities must lie in (0, 1]");
    }
    total += e.probability;
  }
  if (std::abs(total - 1.0) > kNormalizationTol) {
    throw Error(ErrorKind::domain, "choice probabilities do not sum to 1");
  }
}

double ChoiceDistribution::probability(Outcome outcome) const noexcept {
  for (const auto& e : entries_) {
    if (e.outcome == outcome) return e.probability;
  }
  return 0.0;
}

std::vector<double> ChoiceDistribution::probabilities() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.probability);
  return out;
}

ChoiceDistribution choice_distribution(const MnlInstance& instance, const Assortment& s) {
  instance.validate(s);
  double den = 1.0;
  for (ItemId id : s.items()) den += instance.preference(id);
  std::vector<ChoiceDistribution::Entry> entries;
  entries.reserve(s.size() + 1);
  entries.push_back({kNoPurchase, 1.0 / den});
  for (ItemId id : s.items()) entries.push_back({id, instance.preference(id) / den});
  return ChoiceDistribution(std::move(entries));
}

double expected_revenue(const MnlInstance& instance, const Assortment& s) {
  instance.validate(s);
  return weighted_revenue(instance.revenues(), instance.preferences(), s);
}

Outcome sample_choice(const ChoiceDistribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  const auto entries = dist.entries();
  for (const auto& e : entries) {
    cumulative += e.probability;
    if (u < cumulative) return e.outcome;
  }
  // u landed in the rounding slack above the last cumulative sum.
  return entries.back().outcome;
}

OptimalAssortment best_assortment(std::span<const double> revenues,
                                  std::span<const double> weights, int capacity) {
  if (revenues.size() != weights.size()) {
    throw Error(ErrorKind::invalid_instance, "revenues and weights differ in length");
  }
  Assortment chosen;
  if (all_equal(revenues)) {
    chosen = top_by_weight(weights, capacity);
  } else {
    if (weights.size() > static_cast<std::size_t>(kEnumerationLimit)) {
      throw Error(ErrorKind::too_large,
                  "exhaustive assortment search limited to N <= " +
                      std::to_string(kEnumerationLimit) + " items with non-uniform revenues");
    }
    Enumerator e{revenues, weights, capacity, {}, {}, -1.0};
    e.visit(0, 0.0, 0.0);
    chosen = Assortment(std::move(e.best));
  }
  return {chosen, weighted_revenue(revenues, weights, chosen)};
}

OptimalAssortment best_assortment(const MnlInstance& instance) {
  auto best = best_assortment(instance.revenues(), instance.preferences(), instance.capacity());
  best.value = expected_revenue(instance, best.assortment);
  return best;
}

double instantaneous_regret(const MnlInstance& instance, const OptimalAssortment& best,
                            const Assortment& s) {
  instance.validate(s);
  instance.validate(best.assortment);
  // R* - R(s) = (n* d - n d*) / (d* d), which avoids subtracting two nearly equal ratios.
  const auto opt = revenue_terms(instance, best.assortment);
  const auto cur = revenue_terms(instance, s);
  const double gap = detail::difference_of_products(opt.num, cur.den, cur.num, opt.den) /
                     (opt.den * cur.den);
  return std::max(0.0, gap);
}

double instantaneous_regret(const MnlInstance& instance, const Assortment& s) {
  return instantaneous_regret(instance, best_assortment(instance), s);
}

}  // namespace mnlb
