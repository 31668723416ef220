#pragma once

// Grid sweeps behind `mnlb verify`. Each returns one AuditReport whose rows hold the
// worst case over the sweep, with the location recorded in the row note.

#include <cstdint>
#include <tuple>
#include <vector>

#include "mnlb/audit.hpp"
#include "mnlb/divergence.hpp"

namespace mnlb {

/// Environment-measured single-round gap versus the closed form and the delta*eps/9 floor,
/// for eps in {0.01, ..., 0.5} and delta in {0, 0.05, ..., 1} (N = 40, K = 20).
AuditReport gap_certificate();

/// kl <= quadratic bound and kl >= 0 on the corpus.
AuditReport quadratic_kl_certificate(const std::vector<CategoricalPair>& corpus);

/// tv <= sqrt(kl / 2) on the corpus.
AuditReport pinsker_certificate(const std::vector<CategoricalPair>& corpus);

/// Per-step KL and its coordinate bounds over K x eps x every valid (K', J).
AuditReport step_kl_certificate(const std::vector<int>& capacities,
                               const std::vector<double>& epsilons);
AuditReport step_kl_certificate();

/// proof_chain_audit at each (N, T, K) with the scheduled epsilon.
AuditReport chain_certificate(
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>& points);
AuditReport chain_certificate();

/// Offer-count identities on `trajectories` simulated runs cycling through the fixed,
/// random and epoch-UCB policies on planted instances.
AuditReport count_certificate(int trajectories = 100, int n_items = 16, int capacity = 4,
                              std::int64_t horizon = 1024, std::uint64_t seed = 7);

}  // namespace mnlb
