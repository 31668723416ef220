#pragma once

// Assortment-selection policies. A policy sees (N, K, revenues) and its own observations,
// never the preference weights.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mnlb/mnl.hpp"
#include "mnlb/rng.hpp"

namespace mnlb {

struct PublicInstance {
  int n_items = 0;
  int capacity = 0;
  std::vector<double> revenues;

  static PublicInstance of(const MnlInstance& instance);
};

struct Observation {
  Assortment offered;
  Outcome outcome;
  std::int64_t step = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual Assortment act(const PublicInstance& info) = 0;
  /// Throws protocol if obs.offered differs from the last emitted assortment or the outcome
  /// is not in it.
  void observe(const Observation& obs);

 protected:
  void remember(const Assortment& emitted) { last_emitted_ = emitted; has_emitted_ = true; }
  virtual void update(const Observation& obs) = 0;

 private:
  Assortment last_emitted_;
  bool has_emitted_ = false;
};

class FixedPolicy final : public Policy {
 public:
  explicit FixedPolicy(Assortment target) : target_(std::move(target)) {}

  std::string name() const override;
  Assortment act(const PublicInstance& info) override;
  const Assortment& target() const noexcept { return target_; }

 protected:
  void update(const Observation&) override {}

 private:
  Assortment target_;
};

/// Uniform size-K subset each round, from its own stream.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

  std::string name() const override { return "random"; }
  Assortment act(const PublicInstance& info) override;

 protected:
  void update(const Observation&) override {}

 private:
  Rng rng_;
};

struct UcbConstants {
  double variance_scale = 48.0;
  double bias_scale = 48.0;
};

struct ItemStats {
  std::int64_t epochs_offered = 0;
  std::int64_t total_purchases = 0;
  double v_hat = 0.0;
  /// +inf until the item has been offered in a completed epoch.
  double v_ucb = 0.0;
};

struct EpochUcbState {
  std::vector<ItemStats> items;
  /// 1-based index of the running epoch.
  std::int64_t epoch = 1;
  std::optional<Assortment> current;
  /// Purchases of each item during the running epoch.
  std::vector<std::int64_t> tally;
};

/// Optimistic index v_hat + sqrt(c1 v_hat log(sqrt(N) l + 1) / T_i) + c2 log(sqrt(N) l + 1) / T_i.
double ucb_index(const ItemStats& stats, int n_items, std::int64_t epoch, const UcbConstants& c);

/// Optimistic assortment for the current indices. Items never seen (index +inf) come first,
/// smallest ids first; leftover capacity goes to the revenue-optimal subset of seen items
/// under weights v_ucb.
Assortment ucb_assortment(const EpochUcbState& state, std::span<const double> revenues,
                          int capacity);

/// Offers one assortment until a no-purchase, then updates per-item means of per-epoch
/// purchase counts (each an unbiased estimate of v_i) and re-optimizes against the
/// optimistic indices. An epoch cut off by the horizon never reaches the estimates.
class EpochUcbPolicy final : public Policy {
 public:
  explicit EpochUcbPolicy(int n_items, UcbConstants constants = {});

  std::string name() const override { return "epoch-ucb"; }
  Assortment act(const PublicInstance& info) override;
  const EpochUcbState& state() const noexcept { return state_; }
  const UcbConstants& constants() const noexcept { return constants_; }

 protected:
  void update(const Observation& obs) override;

 private:
  void refresh_indices();

  UcbConstants constants_;
  EpochUcbState state_;
};

enum class PolicyKind { fixed, random, epoch_ucb };

/// Serializable policy description: "fixed=1,2,3", "random=7", "epoch-ucb=48,48".
struct PolicySpec {
  PolicyKind kind = PolicyKind::epoch_ucb;
  std::vector<ItemId> items;
  std::uint64_t seed = 0;
  UcbConstants constants;

  static PolicySpec parse(const std::string& text);
  std::string to_string() const;
  bool operator==(const PolicySpec&) const;
};

/// `stream_seed` seeds the random policy (combined with its own configured seed).
/// Fixed policies default to {1..K} when no items are given.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, int n_items, int capacity,
                                    std::uint64_t stream_seed);

}  // namespace mnlb
