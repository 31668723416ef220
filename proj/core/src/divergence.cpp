#include "mnlb/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "mnlb/adversarial.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/rng.hpp"

namespace mnlb {

namespace {

using BigInt = boost::multiprecision::cpp_int;

void check_probability_vector(const std::vector<double>& x, const char* label) {
  double total = 0.0;
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::domain, std::string(label) + " has a nonpositive entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::domain, std::string(label) + " does not sum to 1");
  }
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  BigInt out = 1;
  for (std::int64_t m = 1; m <= k; ++m) {
    out *= n - k + m;
    out /= m;
  }
  return out;
}

double big_ratio(const BigInt& num, const BigInt& den) {
  // Both sides fit comfortably in double range for the sizes the audit runs at.
  return num.convert_to<double>() / den.convert_to<double>();
}

}  // namespace

CategoricalPair::CategoricalPair(std::vector<double> p, std::vector<double> q)
    : p_(std::move(p)), q_(std::move(q)) {
  if (p_.size() != q_.size() || p_.size() < 2) {
    throw Error(ErrorKind::domain, "categorical pair needs two vectors of equal length >= 2");
  }
  check_probability_vector(p_, "p");
  check_probability_vector(q_, "q");
}

double kl_exact(const CategoricalPair& pair) {
  double total = 0.0;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    total += pair.p()[j] * std::log(pair.p()[j] / pair.q()[j]);
  }
  return total;
}

double kl_quadratic_bound(const CategoricalPair& pair) {
  double total = 0.0;
  for (std::size_t j = 0; j < pair.size(); ++j) {
    const double d = pair.p()[j] - pair.q()[j];
    total += d * d / pair.q()[j];
  }
  return total;
}

double tv_distance(const CategoricalPair& pair) {
  double total = 0.0;
  for (std::size_t j = 0; j < pair.size(); ++j) total += std::abs(pair.p()[j] - pair.q()[j]);
  return 0.5 * total;
}

double pinsker_count_gap(std::int64_t horizon, double kl) {
  if (horizon < 1) throw Error(ErrorKind::domain, "horizon must be positive");
  if (!(kl >= 0.0)) throw Error(ErrorKind::domain, "KL divergence must be nonnegative");
  return static_cast<double>(horizon) * std::sqrt(kl / 2.0);
}

std::vector<CategoricalPair> random_pair_corpus(std::size_t count, std::size_t max_dim,
                                                std::uint64_t seed, double floor) {
  if (max_dim < 2) throw Error(ErrorKind::domain, "corpus dimension must be at least 2");
  Rng rng(seed);
  auto draw = [&](std::size_t dim) {
    std::vector<double> x(dim);
    for (auto& v : x) v = uniform01(rng);
    const double s = std::accumulate(x.begin(), x.end(), 0.0);
    for (auto& v : x) v = std::max(v / s, floor);
    const double t = std::accumulate(x.begin(), x.end(), 0.0);
    for (auto& v : x) v /= t;
    return x;
  };
  std::vector<CategoricalPair> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t dim = 2 + static_cast<std::size_t>(uniform01(rng) * (max_dim - 1));
    auto p = draw(dim);
    auto q = draw(dim);
    out.emplace_back(std::move(p), std::move(q));
  }
  return out;
}

StepKlContext::StepKlContext(double epsilon, int capacity, Assortment offered,
                             Assortment elevated_base, ItemId item)
    : epsilon_(epsilon),
      capacity_(capacity),
      offered_(std::move(offered)),
      base_(std::move(elevated_base)),
      item_(item) {
  if (!(epsilon_ > 0.0 && epsilon_ <= 0.5)) {
    throw Error(ErrorKind::domain, "per-step KL needs epsilon in (0, 0.5]");
  }
  if (capacity_ < 1) throw Error(ErrorKind::domain, "capacity must be positive");
  if (static_cast<int>(base_.size()) != capacity_ - 1) {
    throw Error(ErrorKind::invalid_assortment, "neighbouring base set must have K-1 items");
  }
  if (item_ < 1 || base_.contains(item_)) {
    throw Error(ErrorKind::invalid_assortment, "item must be a valid id outside the base set");
  }
  if (static_cast<int>(offered_.size()) > capacity_) {
    throw Error(ErrorKind::capacity_violation, "offered set exceeds K");
  }
}

StepKlContext StepKlContext::canonical(double epsilon, int capacity, int k_prime, int j_overlap) {
  if (k_prime < 1 || k_prime > capacity || j_overlap < 0 || j_overlap > k_prime - 1 ||
      j_overlap > capacity - 1) {
    throw Error(ErrorKind::domain, "need 1 <= K' <= K and 0 <= J <= min(K'-1, K-1)");
  }
  std::vector<ItemId> offered{capacity};
  for (int j = 1; j <= j_overlap; ++j) offered.push_back(j);
  for (int m = 0; m < k_prime - 1 - j_overlap; ++m) offered.push_back(capacity + 1 + m);
  return StepKlContext(epsilon, capacity, Assortment(std::move(offered)),
                       Assortment::first(capacity - 1), capacity);
}

StepKl per_step_kl(const StepKlContext& ctx) {
  const double eps = ctx.epsilon();
  const int k = ctx.capacity();
  StepKl out;
  out.bound = 63.0 * eps * eps / k;
  out.coord_margins = AuditReport("per-step KL coordinates");
  if (!ctx.item_offered()) {
    out.exact = 0.0;
    out.note = "item not offered: both conditional laws coincide";
    return out;
  }

  const int n = std::max({ctx.offered().max_item(), ctx.elevated_base().max_item(), ctx.item(), k});
  std::vector<ItemId> with_item(ctx.elevated_base().items().begin(),
                                ctx.elevated_base().items().end());
  with_item.push_back(ctx.item());
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const MnlInstance base_model(k, ones, elevated_preferences(n, k, eps, ctx.elevated_base()));
  const MnlInstance item_model(k, ones,
                               elevated_preferences(n, k, eps, Assortment(std::move(with_item))));

  const auto p_dist = choice_distribution(base_model, ctx.offered());
  const auto q_dist = choice_distribution(item_model, ctx.offered());
  const CategoricalPair pair(p_dist.probabilities(), q_dist.probabilities());
  out.exact = kl_exact(pair);

  const auto& p = pair.p();
  const auto& q = pair.q();
  double other_gap = 0.0;
  double item_gap = 0.0;
  double q_item_floor = 1.0;
  const auto entries = p_dist.entries();
  for (std::size_t j = 1; j < entries.size(); ++j) {
    const double gap = std::abs(p[j] - q[j]);
    if (entries[j].outcome == ctx.item()) {
      item_gap = gap;
    } else {
      other_gap = std::max(other_gap, gap);
    }
    q_item_floor = std::min(q_item_floor, q[j]);
  }

  auto& r = out.coord_margins;
  r.add_upper("coord_no_purchase", std::abs(p[0] - q[0]), eps / k);
  r.add_upper("coord_other_items", other_gap, 2.0 * eps / (static_cast<double>(k) * k));
  r.add_upper("coord_item", item_gap, 4.0 * eps / k);
  r.add_lower("floor_no_purchase", q[0], 1.0 / 3.0);
  r.add_lower("floor_items", q_item_floor, 1.0 / (3.0 * k));
  r.add_upper("quadratic_dominance", out.exact, kl_quadratic_bound(pair));
  r.add_upper("per_step_bound", out.exact, out.bound);
  return out;
}

AuditReport proof_chain_audit(std::int64_t n_items, std::int64_t horizon, std::int64_t capacity,
                              double epsilon) {
  if (n_items < 1 || horizon < 1 || capacity < 1) {
    throw Error(ErrorKind::domain, "N, T and K must be positive");
  }
  if (4 * capacity > n_items) {
    throw Error(ErrorKind::applicability, "chain audit requires K <= N/4");
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(ErrorKind::domain, "epsilon must lie in (0, 0.5]");
  }
  const auto N = static_cast<double>(n_items);
  const auto T = static_cast<double>(horizon);
  const auto K = static_cast<double>(capacity);
  const double complement = N - K + 1.0;  // |{i : i not in S'}| for |S'| = K-1

  AuditReport report("lower-bound chain N=" + std::to_string(n_items) +
                     " T=" + std::to_string(horizon) + " K=" + std::to_string(capacity));

  report.add_upper("gap_denominator", (2.0 + epsilon) * (2.0 + epsilon), 9.0,
                   "(2+eps)(2+(1-delta)eps) <= 9 for eps <= 1/2");

  report.add_upper("capacity_ratio", T * K / complement, T / 3.0, "TK/(N-K+1) <= T/3");

  {
    const BigInt lower = binomial(n_items, capacity - 1);
    const BigInt upper = binomial(n_items, capacity);
    const bool holds = lower * (n_items - capacity + 1) == upper * capacity;
    report.add_exact("binomial_identity", big_ratio(lower, upper * capacity), 1.0 / complement,
                     holds, "C(N,K-1)/(K C(N,K)) = 1/(N-K+1), exact integers");
  }

  // Deterministic reference schedule: round-robin windows of K consecutive ids (mod N).
  // It ignores feedback, so trajectory KL is the sum of per-round conditional KLs.
  const std::int64_t period = n_items / std::gcd(n_items, capacity);
  std::vector<Assortment> windows;
  std::vector<std::int64_t> window_rounds;
  for (std::int64_t w = 0; w < period; ++w) {
    std::vector<ItemId> items;
    for (std::int64_t m = 0; m < capacity; ++m) {
      items.push_back(static_cast<ItemId>((w * capacity + m) % n_items + 1));
    }
    windows.emplace_back(std::move(items));
    window_rounds.push_back(horizon / period + (w < horizon % period ? 1 : 0));
  }
  OfferCounts counts = OfferCounts::zeros(static_cast<int>(n_items));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (ItemId id : windows[w].items()) {
      counts.n_raw[static_cast<std::size_t>(id - 1)] += window_rounds[w];
      counts.n_padded[static_cast<std::size_t>(id - 1)] += window_rounds[w];
    }
  }
  {
    const auto padded_total =
        std::accumulate(counts.n_padded.begin(), counts.n_padded.end(), std::int64_t{0});
    report.add_exact("counting_identity", static_cast<double>(padded_total), T * K,
                     padded_total == horizon * capacity, "sum_i N~_i = TK on reference schedule");
  }

  const Assortment base = Assortment::first(static_cast<int>(capacity) - 1);
  const int k = static_cast<int>(capacity);
  std::vector<double> trajectory_kl;
  double worst_step_margin = std::numeric_limits<double>::infinity();
  double worst_kl = 0.0;
  double worst_cap = 0.0;
  for (ItemId i = 1; i <= static_cast<ItemId>(n_items); ++i) {
    if (base.contains(i)) continue;
    double kl = 0.0;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (!windows[w].contains(i)) continue;
      kl += static_cast<double>(window_rounds[w]) *
            per_step_kl(StepKlContext(epsilon, k, windows[w], base, i)).exact;
    }
    const double cap = static_cast<double>(counts.n_raw[static_cast<std::size_t>(i - 1)]) * 63.0 *
                       epsilon * epsilon / K;
    if (cap - kl < worst_step_margin) {
      worst_step_margin = cap - kl;
      worst_kl = kl;
      worst_cap = cap;
    }
    trajectory_kl.push_back(kl);
  }
  report.add_upper("trajectory_kl", worst_kl, worst_cap,
                   "KL(P_S'||P_S'+i) <= E[N_i] 63 eps^2/K, tightest item");

  double mean_root = 0.0;
  double mean_kl = 0.0;
  for (double kl : trajectory_kl) {
    mean_root += std::sqrt(kl / 2.0);
    mean_kl += kl;
  }
  mean_root /= complement;
  mean_kl /= complement;
  report.add_upper("jensen", mean_root, std::sqrt(mean_kl / 2.0),
                   "mean sqrt(KL/2) <= sqrt(mean KL / 2)");

  const double kl_average_cap = 63.0 * T * epsilon * epsilon / complement;
  report.add_upper("kl_average", mean_kl, kl_average_cap,
                   "(1/(N-K+1)) sum KL <= 63 T eps^2/(N-K+1)");
  report.add_upper("kl_average_loosened", kl_average_cap, 126.0 * T * epsilon * epsilon / N,
                   "63/(N-K+1) <= 126/N");

  const double pinsker_term = T * std::sqrt(kl_average_cap / 2.0);
  report.add_upper("reference_pinsker_term", T * mean_root, pinsker_term,
                   "T/(N-K+1) sum sqrt(KL/2) on reference schedule");

  const double bracket = 2.0 * T / 3.0 - pinsker_term;
  report.add_lower("pinsker_bracket", bracket, T / 3.0, "2T/3 - T sqrt(63 T eps^2/(2(N-K+1)))");

  const double final_value = epsilon / 9.0 * bracket;
  report.add_lower("final_chain", final_value, epsilon * T / 27.0, "(eps/9) bracket >= eps T/27");

  const double theorem = std::min(0.001 * std::sqrt(N * T), T / 54.0);
  report.add_lower("theorem_constants", epsilon * T / 27.0, theorem,
                   "eps T/27 >= min{0.001 sqrt(NT), T/54}");
  return report;
}

AuditReport trajectory_count_audit(const OfferCounts& counts, std::int64_t horizon,
                                   std::int64_t capacity) {
  if (counts.n_raw.size() != counts.n_padded.size() || counts.n_raw.empty()) {
    throw Error(ErrorKind::domain, "offer counts must have one raw and one padded entry per item");
  }
  if (horizon < 0 || capacity < 1) throw Error(ErrorKind::domain, "invalid horizon or capacity");
  for (std::size_t j = 0; j < counts.n_raw.size(); ++j) {
    if (counts.n_raw[j] < 0 || counts.n_padded[j] < 0 || counts.n_padded[j] > horizon) {
      throw Error(ErrorKind::domain, "offer count outside [0, T]");
    }
  }
  AuditReport report("offer counts");
  const auto padded = std::accumulate(counts.n_padded.begin(), counts.n_padded.end(), std::int64_t{0});
  const auto raw = std::accumulate(counts.n_raw.begin(), counts.n_raw.end(), std::int64_t{0});
  report.add_exact("padded_total", static_cast<double>(padded),
                   static_cast<double>(horizon * capacity), padded == horizon * capacity,
                   "sum_i N~_i = TK");
  std::int64_t min_slack = std::numeric_limits<std::int64_t>::max();
  for (std::size_t j = 0; j < counts.n_raw.size(); ++j) {
    min_slack = std::min(min_slack, counts.n_padded[j] - counts.n_raw[j]);
  }
  report.add_exact("raw_le_padded", static_cast<double>(min_slack), 0.0, min_slack >= 0,
                   "min_i (N~_i - N_i) >= 0");
  report.add_exact("raw_total", static_cast<double>(raw), static_cast<double>(horizon * capacity),
                   raw <= horizon * capacity, "sum_i N_i <= TK");
  return report;
}

}  // namespace mnlb
