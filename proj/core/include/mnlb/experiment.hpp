#pragma once

// Trajectory engine and Bayes-regret experiments over the planted-set prior.
//
// Seed scheme: every random stream is derive_seed(master, draw, replication, tag), so a
// result depends only on the configuration, never on scheduling or parallelism degree.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnlb/adversarial.hpp"
#include "mnlb/counts.hpp"
#include "mnlb/mnl.hpp"
#include "mnlb/policies.hpp"

namespace mnlb {

inline constexpr const char* kSeedScheme =
    "splitmix64(master, draw, replication, tag); tags prior=1 choice=2 policy=3; "
    "mt19937_64 engines";

/// Size-K superset of `s` obtained by appending the smallest ids not already in it.
Assortment pad_assortment(const Assortment& s, int n_items, int capacity);

struct RegretTrace {
  std::vector<double> step_regret;
  /// Compensated sum of step_regret.
  double cumulative = 0.0;
  double realized_revenue = 0.0;
  std::uint64_t seed = 0;
  std::string policy_id;
  std::string instance_ref;
};

struct Trajectory {
  RegretTrace trace;
  OfferCounts counts;
};

/// Runs act / sample / observe for `horizon` rounds. Regret is pseudo-regret: the gap in
/// expected revenue between the optimal assortment and the offered one.
Trajectory run_trajectory(Policy& policy, const MnlInstance& instance, std::int64_t horizon,
                          std::uint64_t seed, std::string instance_ref = {});

enum class PriorMode { automatic, sample, exact };
std::string to_string(PriorMode mode);
PriorMode parse_prior_mode(const std::string& text);

/// C(N, K) up to which the automatic prior mode averages over every elevated set.
inline constexpr double kExactPriorLimit = 1e4;

enum class ReportFormat { json, csv, table };
std::string to_string(ReportFormat format);
ReportFormat parse_report_format(const std::string& text);

struct ExperimentConfig {
  int n_items = 16;
  int capacity = 4;
  std::int64_t horizon = 1024;
  PolicySpec policy;
  /// Empty means the scheduled value min{0.05 sqrt(N/T), 0.5}.
  std::optional<double> epsilon;
  int draws = 40;
  int replications = 1;
  std::uint64_t seed = 1;
  PriorMode prior = PriorMode::automatic;
  /// When set, every draw uses this elevated set instead of the prior.
  std::optional<Assortment> planted;
  bool check_theorem = true;
  int parallel = 0;  // 0 = hardware concurrency
  std::string output_path;
  ReportFormat format = ReportFormat::table;

  /// Throws config on nonpositive sizes, K > N, eps outside (0, 0.5] or a bad planted set.
  void validate() const;
  double resolved_epsilon() const;
};

struct DrawRecord {
  int draw_id = 0;
  std::uint64_t seed = 0;
  Assortment elevated_set;
  /// Mean cumulative pseudo-regret over replications.
  double cum_regret = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  double epsilon = 0.0;
  PriorMode prior_used = PriorMode::sample;
  double mean_regret = 0.0;
  double standard_error = 0.0;
  std::vector<DrawRecord> draws;
  std::optional<LowerBoundValue> bound;
  /// mean - 2 SE - bound; present with `bound`.
  std::optional<double> margin;
  bool passed = false;
  /// Trajectories whose offer-count identities failed (always expected to be 0).
  int count_audit_failures = 0;
  std::string notice;
};

/// Average cumulative pseudo-regret over elevated sets drawn from the uniform prior (or
/// enumerated exhaustively), with replications per set.
ExperimentResult bayes_regret(const ExperimentConfig& config);

struct ScalingPoint {
  std::int64_t horizon = 0;
  double mean_regret = 0.0;
  double standard_error = 0.0;
  double residual = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  /// NaN when `zero_regret` is set.
  double slope = 0.0;
  double intercept = 0.0;
  bool zero_regret = false;
};

/// Least-squares slope of log(mean regret) against log(T), one bayes_regret run per horizon
/// with everything else taken from `base`. Needs at least 3 distinct horizons.
ScalingFit scaling_fit(const ExperimentConfig& base, const std::vector<std::int64_t>& horizons);

}  // namespace mnlb
