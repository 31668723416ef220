#include "mnlb/certificates.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "mnlb/adversarial.hpp"
#include "mnlb/experiment.hpp"
#include "mnlb/policies.hpp"
#include "mnlb/report.hpp"

namespace mnlb {

namespace {

// Keeps, per check name, the row with the smallest margin; first-seen name order.
class WorstCase {
 public:
  explicit WorstCase(std::string title) : title_(std::move(title)) {}

  void absorb(const AuditReport& r, const std::string& where) {
    for (const auto& c : r.checks()) {
      auto it = index_.find(c.name);
      if (it == index_.end()) {
        index_.emplace(c.name, rows_.size());
        rows_.push_back(c);
        rows_.back().note = where;
      } else if (c.margin < rows_[it->second].margin) {
        rows_[it->second] = c;
        rows_[it->second].note = where;
      }
    }
  }

  AuditReport report() const {
    AuditReport out(title_);
    for (const auto& c : rows_) {
      out.add_row(c);
    }
    return out;
  }

 private:
  std::string title_;
  std::map<std::string, std::size_t> index_;
  std::vector<AuditCheck> rows_;
};

std::string at(std::initializer_list<std::pair<const char*, double>> fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    if (!out.empty()) out += ' ';
    out += std::string(k) + "=" + format_real(v);
  }
  return out;
}

}  // namespace

AuditReport gap_certificate() {
  constexpr int kN = 40;
  constexpr int kK = 20;
  const Assortment planted = Assortment::first(kK);
  WorstCase worst("single-round gap (N=40, K=20)");
  for (int e = 1; e <= 50; ++e) {
    const double eps = e / 100.0;
    const auto instance = build_instance(AdversarialSpec(kN, kK, eps, planted));
    const auto best = best_assortment(instance);
    AuditReport opt;
    opt.add_exact("planted_is_optimal", best.value, (1.0 + eps) / (2.0 + eps),
                  best.assortment == planted);
    worst.absorb(opt, at({{"eps", eps}}));
    for (int d = 0; d <= 20; ++d) {
      const int missing = d;  // delta = missing / K, step 0.05 at K = 20
      std::vector<ItemId> items;
      for (int j = 1; j <= kK - missing; ++j) items.push_back(j);
      for (int j = 0; j < missing; ++j) items.push_back(kK + 1 + j);
      const Assortment s(std::move(items));
      const double delta = overlap_delta(planted, s, kK);
      const double measured = instantaneous_regret(instance, best, s);
      const auto gap = single_stage_gap(eps, delta);
      AuditReport r;
      r.add_equal("gap_matches_closed_form", measured, gap.exact_gap, 1e-12);
      r.add_lower("gap_above_floor", measured, gap.lower_bound_gap);
      worst.absorb(r, at({{"eps", eps}, {"delta", delta}}));
    }
  }
  return worst.report();
}

AuditReport quadratic_kl_certificate(const std::vector<CategoricalPair>& corpus) {
  WorstCase worst("quadratic KL bound (" + std::to_string(corpus.size()) + " pairs)");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const double kl = kl_exact(corpus[i]);
    AuditReport r;
    r.add_upper("kl_le_quadratic", kl, kl_quadratic_bound(corpus[i]));
    r.add_lower("kl_nonnegative", kl, 0.0);
    worst.absorb(r, "pair " + std::to_string(i) + " dim " + std::to_string(corpus[i].size()));
  }
  return worst.report();
}

AuditReport pinsker_certificate(const std::vector<CategoricalPair>& corpus) {
  WorstCase worst("Pinsker (" + std::to_string(corpus.size()) + " pairs)");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    AuditReport r;
    r.add_upper("tv_le_sqrt_half_kl", tv_distance(corpus[i]), std::sqrt(kl_exact(corpus[i]) / 2.0));
    worst.absorb(r, "pair " + std::to_string(i));
  }
  return worst.report();
}

AuditReport step_kl_certificate(const std::vector<int>& capacities,
                               const std::vector<double>& epsilons) {
  WorstCase worst("per-step KL grid");
  for (int k : capacities) {
    for (double eps : epsilons) {
      for (int kp = 1; kp <= k; ++kp) {
        for (int j = 0; j <= std::min(kp - 1, k - 1); ++j) {
          const auto step = per_step_kl(StepKlContext::canonical(eps, k, kp, j));
          worst.absorb(step.coord_margins, at({{"K", double(k)}, {"eps", eps}, {"K'", double(kp)}, {"J", double(j)}}));
        }
      }
    }
  }
  return worst.report();
}

AuditReport step_kl_certificate() {
  std::vector<double> eps;
  for (int e = 1; e <= 10; ++e) eps.push_back(0.05 * e);
  return step_kl_certificate({2, 5, 10, 20}, eps);
}

AuditReport chain_certificate(
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>& points) {
  AuditReport out("lower-bound chain");
  for (const auto& [n, t, k] : points) {
    const auto r = proof_chain_audit(n, t, k, epsilon_schedule(n, t));
    for (auto c : r.checks()) {
      c.name = c.name + "[N=" + std::to_string(n) + ",T=" + std::to_string(t) +
               ",K=" + std::to_string(k) + "]";
      out.add_row(std::move(c));
    }
  }
  return out;
}

AuditReport chain_certificate() {
  return chain_certificate({{16, 1024, 4}, {100, 40000, 25}, {400, 1000000, 100}});
}

AuditReport count_certificate(int trajectories, int n_items, int capacity, std::int64_t horizon,
                              std::uint64_t seed) {
  WorstCase worst("offer counts (" + std::to_string(trajectories) + " trajectories)");
  const double eps = epsilon_schedule(n_items, horizon);
  const PolicySpec specs[] = {PolicySpec::parse("fixed"), PolicySpec::parse("fixed=1"),
                              PolicySpec::parse("random"), PolicySpec::parse("epoch-ucb")};
  for (int r = 0; r < trajectories; ++r) {
    const auto ur = static_cast<std::uint64_t>(r);
    Rng prior(derive_seed(seed, ur, 0, StreamTag::prior));
    const auto instance = build_instance(
        AdversarialSpec(n_items, capacity, eps, sample_elevated_set(n_items, capacity, prior)));
    const auto& spec = specs[static_cast<std::size_t>(r) % std::size(specs)];
    auto policy = make_policy(spec, n_items, capacity, derive_seed(seed, ur, 0, StreamTag::policy));
    const auto run = run_trajectory(*policy, instance, horizon,
                                    derive_seed(seed, ur, 0, StreamTag::choice));
    worst.absorb(trajectory_count_audit(run.counts, horizon, capacity),
                 "trajectory " + std::to_string(r) + " " + spec.to_string());
  }
  return worst.report();
}

}  // namespace mnlb
