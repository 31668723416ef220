#pragma once

// KL / total-variation toolkit for categorical laws and the numeric certificates built on it.
// Logarithms are natural (nats) throughout.

#include <cstdint>
#include <string>
#include <vector>

#include "mnlb/audit.hpp"
#include "mnlb/counts.hpp"
#include "mnlb/mnl.hpp"

namespace mnlb {

/// Two strictly positive probability vectors over the same outcomes 0..J.
class CategoricalPair {
 public:
  /// Throws domain on length mismatch, fewer than 2 outcomes, a nonpositive entry, or a
  /// vector whose sum differs from 1 by more than 1e-12.
  CategoricalPair(std::vector<double> p, std::vector<double> q);

  const std::vector<double>& p() const noexcept { return p_; }
  const std::vector<double>& q() const noexcept { return q_; }
  std::size_t size() const noexcept { return p_.size(); }

 private:
  std::vector<double> p_;
  std::vector<double> q_;
};

double kl_exact(const CategoricalPair& pair);

/// sum_j (p_j - q_j)^2 / q_j, which dominates KL(p || q).
double kl_quadratic_bound(const CategoricalPair& pair);

double tv_distance(const CategoricalPair& pair);

/// T * sqrt(kl / 2): ceiling on |E_P[N] - E_Q[N]| for any count N in [0, T].
double pinsker_count_gap(std::int64_t horizon, double kl);

/// Seeded corpus of random pairs of dimension 2..max_dim. Entries are floored at `floor`
/// and renormalized.
std::vector<CategoricalPair> random_pair_corpus(std::size_t count, std::size_t max_dim,
                                                std::uint64_t seed = 0xA55,
                                                double floor = 1e-3);

/// One round of the neighbouring-parameterization comparison: under theta_{S'} and
/// theta_{S' ∪ {i}} the customer is offered S_t; the two purchase laws differ only through i.
class StepKlContext {
 public:
  /// Requires eps in (0, 0.5] (domain), |S'| = K-1, i not in S', |S_t| <= K.
  StepKlContext(double epsilon, int capacity, Assortment offered, Assortment elevated_base,
                ItemId item);

  /// Concrete sets realizing (K', J) with i = K offered: S' = {1..K-1}, S_t = {K} plus the
  /// first J items of S' plus K'-1-J items numbered from K+1.
  static StepKlContext canonical(double epsilon, int capacity, int k_prime, int j_overlap);

  double epsilon() const noexcept { return epsilon_; }
  int capacity() const noexcept { return capacity_; }
  const Assortment& offered() const noexcept { return offered_; }
  const Assortment& elevated_base() const noexcept { return base_; }
  ItemId item() const noexcept { return item_; }
  int k_prime() const noexcept { return static_cast<int>(offered_.size()); }
  int j_overlap() const noexcept { return static_cast<int>(offered_.overlap(base_)); }
  /// 1 + K'/K
  double a() const noexcept { return 1.0 + static_cast<double>(k_prime()) / capacity_; }
  bool item_offered() const noexcept { return offered_.contains(item_); }

 private:
  double epsilon_;
  int capacity_;
  Assortment offered_;
  Assortment base_;
  ItemId item_;
};

struct StepKl {
  double exact = 0.0;
  /// 63 eps^2 / K
  double bound = 0.0;
  /// Coordinate-difference and floor checks on the two conditional laws, plus exact <= bound
  /// and the quadratic-bound dominance. Empty when the item is not offered.
  AuditReport coord_margins;
  std::string note;
};

StepKl per_step_kl(const StepKlContext& ctx);

/// Numeric certificate of the lower-bound chain at (N, T, K, eps). Requires K <= N/4.
/// The row "final_chain" holds the assembled regret lower bound (eps/9)(2T/3 - pinsker term).
AuditReport proof_chain_audit(std::int64_t n_items, std::int64_t horizon, std::int64_t capacity,
                              double epsilon);

/// sum_i Ñ_i = TK, N_i <= Ñ_i per item and sum_i N_i <= TK, all in integer arithmetic.
AuditReport trajectory_count_audit(const OfferCounts& counts, std::int64_t horizon,
                                   std::int64_t capacity);

}  // namespace mnlb
