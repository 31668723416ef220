#pragma once

// Lower-bound instance family: all revenues 1, preferences (1+eps)/K on a planted
// ("elevated") set of size K and 1/K elsewhere.

#include <cstdint>
#include <string_view>
#include <vector>

#include "mnlb/mnl.hpp"
#include "mnlb/rng.hpp"

namespace mnlb {

class AdversarialSpec {
 public:
  /// Throws invalid_instance unless eps in (0, 0.5], |elevated| = K, K <= N and ids in range.
  AdversarialSpec(int n_items, int capacity, double epsilon, Assortment elevated);

  int n_items() const noexcept { return n_items_; }
  int capacity() const noexcept { return capacity_; }
  double epsilon() const noexcept { return epsilon_; }
  const Assortment& elevated_set() const noexcept { return elevated_; }
  /// K <= N/4, the regime where the lower bound is certified.
  bool theorem_applicable() const noexcept { return 4 * capacity_ <= n_items_; }

 private:
  int n_items_;
  int capacity_;
  double epsilon_;
  Assortment elevated_;
};

/// Preferences (1+eps)/K on `elevated`, 1/K elsewhere. `elevated` may have any size <= N,
/// which the neighbouring-set KL computations need (|S'| = K-1).
std::vector<double> elevated_preferences(int n_items, int capacity, double epsilon,
                                         const Assortment& elevated);

MnlInstance build_instance(const AdversarialSpec& spec);

/// min{0.05 * sqrt(N/T), 0.5}.
double epsilon_schedule(std::int64_t n_items, std::int64_t horizon);

/// 1 - |s0 ∩ s_tilde| / K. Both sets must have size exactly K.
double overlap_delta(const Assortment& s0, const Assortment& s_tilde, int capacity);

struct GapValue {
  double delta = 0.0;
  double exact_gap = 0.0;
  double lower_bound_gap = 0.0;
};

/// Single-round regret of a size-K set missing a delta fraction of the planted set, in
/// closed form, alongside the delta*eps/9 floor. eps must lie in (0, 0.5].
GapValue single_stage_gap(double epsilon, double delta);

enum class BoundRegime { sqrt_nt, linear_t };
std::string_view to_string(BoundRegime regime) noexcept;

struct LowerBoundValue {
  double value = 0.0;
  double constant_c = 0.001;
  BoundRegime regime = BoundRegime::sqrt_nt;
};

/// min{0.001 sqrt(NT), T/54}. Throws applicability unless K <= N/4.
LowerBoundValue theorem_lower_bound(std::int64_t n_items, std::int64_t horizon,
                                    std::int64_t capacity);

/// Uniform draw from all size-K subsets of [N].
Assortment sample_elevated_set(int n_items, int capacity, Rng& rng);

/// Every size-K subset of [N] in lexicographic order. Intended for small C(N, K).
std::vector<Assortment> enumerate_subsets(int n_items, int capacity);

}  // namespace mnlb
