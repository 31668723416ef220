#include "mnlb/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "mnlb/errors.hpp"

namespace mnlb {

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorKind::domain, "epsilon must lie in (0, 0.5]");
  }
}

}  // namespace

AdversarialSpec::AdversarialSpec(int n_items, int capacity, double epsilon, Assortment elevated)
    : n_items_(n_items), capacity_(capacity), epsilon_(epsilon), elevated_(std::move(elevated)) {
  if (n_items_ < 1 || capacity_ < 1 || capacity_ > n_items_) {
    throw Error(ErrorKind::invalid_instance, "adversarial spec needs 1 <= K <= N");
  }
  if (!(epsilon_ > 0.0 && epsilon_ <= 0.5)) {
    throw Error(ErrorKind::invalid_instance, "adversarial spec needs epsilon in (0, 0.5]");
  }
  if (static_cast<int>(elevated_.size()) != capacity_) {
    throw Error(ErrorKind::invalid_instance, "elevated set must have exactly K items");
  }
  if (elevated_.max_item() > n_items_) {
    throw Error(ErrorKind::invalid_instance, "elevated set item exceeds N");
  }
}

std::vector<double> elevated_preferences(int n_items, int capacity, double epsilon,
                                         const Assortment& elevated) {
  const double base = 1.0 / capacity;
  const double high = (1.0 + epsilon) / capacity;
  std::vector<double> v(static_cast<std::size_t>(n_items), base);
  for (ItemId id : elevated.items()) v.at(static_cast<std::size_t>(id - 1)) = high;
  return v;
}

MnlInstance build_instance(const AdversarialSpec& spec) {
  return MnlInstance(spec.capacity(), std::vector<double>(static_cast<std::size_t>(spec.n_items()), 1.0),
                     elevated_preferences(spec.n_items(), spec.capacity(), spec.epsilon(),
                                          spec.elevated_set()));
}

double epsilon_schedule(std::int64_t n_items, std::int64_t horizon) {
  const double ratio = static_cast<double>(n_items) / static_cast<double>(horizon);
  return std::min(0.05 * std::sqrt(ratio), 0.5);
}

double overlap_delta(const Assortment& s0, const Assortment& s_tilde, int capacity) {
  if (capacity < 1 || static_cast<int>(s0.size()) != capacity ||
      static_cast<int>(s_tilde.size()) != capacity) {
    throw Error(ErrorKind::invalid_assortment, "overlap_delta needs two sets of size K");
  }
  return 1.0 - static_cast<double>(s0.overlap(s_tilde)) / capacity;
}

GapValue single_stage_gap(double epsilon, double delta) {
  require_epsilon(epsilon);
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorKind::domain, "delta must lie in [0, 1]");
  GapValue g;
  g.delta = delta;
  g.exact_gap = delta * epsilon / ((2.0 + epsilon) * (2.0 + (1.0 - delta) * epsilon));
  g.lower_bound_gap = delta * epsilon / 9.0;
  return g;
}

std::string_view to_string(BoundRegime regime) noexcept {
  return regime == BoundRegime::sqrt_nt ? "SQRT_NT" : "LINEAR_T";
}

LowerBoundValue theorem_lower_bound(std::int64_t n_items, std::int64_t horizon,
                                    std::int64_t capacity) {
  if (n_items < 1 || horizon < 1 || capacity < 1) {
    throw Error(ErrorKind::domain, "N, T and K must be positive");
  }
  if (4 * capacity > n_items) {
    throw Error(ErrorKind::applicability,
                "lower bound requires K <= N/4 (got N = " + std::to_string(n_items) +
                    ", K = " + std::to_string(capacity) + ")");
  }
  const double sqrt_branch = 0.001 * std::sqrt(static_cast<double>(n_items) * horizon);
  const double linear_branch = static_cast<double>(horizon) / 54.0;
  LowerBoundValue out;
  if (sqrt_branch <= linear_branch) {
    out.value = sqrt_branch;
    out.regime = BoundRegime::sqrt_nt;
  } else {
    out.value = linear_branch;
    out.regime = BoundRegime::linear_t;
  }
  return out;
}

Assortment sample_elevated_set(int n_items, int capacity, Rng& rng) {
  if (capacity < 0 || capacity > n_items) {
    throw Error(ErrorKind::invalid_instance, "cannot draw K > N items");
  }
  // Selection sampling: item j is kept with probability (needed)/(remaining).
  std::vector<ItemId> chosen;
  chosen.reserve(static_cast<std::size_t>(capacity));
  int needed = capacity;
  for (int j = 1; j <= n_items && needed > 0; ++j) {
    const int remaining = n_items - j + 1;
    if (uniform01(rng) * remaining < needed) {
      chosen.push_back(j);
      --needed;
    }
  }
  return Assortment(std::move(chosen));
}

std::vector<Assortment> enumerate_subsets(int n_items, int capacity) {
  std::vector<Assortment> out;
  if (capacity < 0 || capacity > n_items) return out;
  std::vector<ItemId> idx(static_cast<std::size_t>(capacity));
  std::iota(idx.begin(), idx.end(), 1);
  while (true) {
    out.emplace_back(idx);
    int pos = capacity - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n_items - capacity + pos + 1) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int m = pos + 1; m < capacity; ++m) {
      idx[static_cast<std::size_t>(m)] = idx[static_cast<std::size_t>(m - 1)] + 1;
    }
  }
  return out;
}

}  // namespace mnlb
