#include "mnlb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "compensated.hpp"
#include "mnlb/divergence.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/rng.hpp"

namespace mnlb {

namespace {

double binomial_double(int n, int k) {
  double out = 1.0;
  for (int m = 1; m <= k; ++m) out = out * (n - k + m) / m;
  return out;
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

int resolve_threads(int requested, std::size_t tasks) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(tasks, 1)));
}

// Runs body(index) for index in [0, count) on `threads` workers. Each index writes only its
// own output slot, so results do not depend on the interleaving.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed.load(); i = next++) {
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Assortment pad_assortment(const Assortment& s, int n_items, int capacity) {
  if (capacity > n_items) throw Error(ErrorKind::capacity_violation, "cannot pad to K > N items");
  if (static_cast<int>(s.size()) > capacity) {
    throw Error(ErrorKind::capacity_violation, "assortment already exceeds K");
  }
  if (static_cast<int>(s.size()) == capacity) return s;
  std::vector<ItemId> items(s.items().begin(), s.items().end());
  for (ItemId id = 1; static_cast<int>(items.size()) < capacity; ++id) {
    if (!s.contains(id)) items.push_back(id);
  }
  return Assortment(std::move(items));
}

Trajectory run_trajectory(Policy& policy, const MnlInstance& instance, std::int64_t horizon,
                          std::uint64_t seed, std::string instance_ref) {
  if (horizon < 1) throw Error(ErrorKind::config, "horizon must be positive");
  const auto best = best_assortment(instance);
  const auto info = PublicInstance::of(instance);
  const int n = instance.n_items();
  const int k = instance.capacity();
  Rng rng(seed);

  Trajectory out;
  out.counts = OfferCounts::zeros(n);
  auto& trace = out.trace;
  trace.seed = seed;
  trace.policy_id = policy.name();
  trace.instance_ref = std::move(instance_ref);
  trace.step_regret.reserve(static_cast<std::size_t>(horizon));

  std::optional<Assortment> cached;
  std::optional<ChoiceDistribution> dist;
  Assortment padded;
  double regret = 0.0;
  detail::CompensatedSum cumulative;

  for (std::int64_t t = 1; t <= horizon; ++t) {
    Assortment offered = policy.act(info);
    if (!cached || offered != *cached) {
      try {
        instance.validate(offered);
      } catch (const Error& e) {
        throw Error(ErrorKind::protocol, std::string("policy emitted an invalid assortment: ") + e.what());
      }
      dist = choice_distribution(instance, offered);
      regret = instantaneous_regret(instance, best, offered);
      padded = pad_assortment(offered, n, k);
      cached = offered;
    }
    const Outcome outcome = sample_choice(*dist, rng);
    trace.step_regret.push_back(regret);
    cumulative.add(regret);
    if (outcome) trace.realized_revenue += instance.revenue(*outcome);
    for (ItemId id : offered.items()) ++out.counts.n_raw[static_cast<std::size_t>(id - 1)];
    for (ItemId id : padded.items()) ++out.counts.n_padded[static_cast<std::size_t>(id - 1)];
    policy.observe({std::move(offered), outcome, t});
  }
  trace.cumulative = cumulative.value();
  return out;
}

std::string to_string(PriorMode mode) {
  switch (mode) {
    case PriorMode::automatic: return "auto";
    case PriorMode::sample: return "sample";
    case PriorMode::exact: return "exact";
  }
  return "auto";
}

PriorMode parse_prior_mode(const std::string& text) {
  if (text == "auto") return PriorMode::automatic;
  if (text == "sample") return PriorMode::sample;
  if (text == "exact") return PriorMode::exact;
  throw Error(ErrorKind::config, "prior must be auto, sample or exact");
}

std::string to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return "json";
    case ReportFormat::csv: return "csv";
    case ReportFormat::table: return "table";
  }
  return "table";
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "table") return ReportFormat::table;
  throw Error(ErrorKind::config, "format must be json, csv or table");
}

void ExperimentConfig::validate() const {
  if (n_items < 1) throw Error(ErrorKind::config, "N must be positive");
  if (capacity < 1 || capacity > n_items) throw Error(ErrorKind::config, "K must satisfy 1 <= K <= N");
  if (horizon < 1) throw Error(ErrorKind::config, "T must be positive");
  if (replications < 1) throw Error(ErrorKind::config, "replications must be positive");
  if (draws < 1) throw Error(ErrorKind::config, "prior draws must be positive");
  if (parallel < 0) throw Error(ErrorKind::config, "parallel degree must be nonnegative");
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 0.5)) {
    throw Error(ErrorKind::config, "epsilon must lie in (0, 0.5]");
  }
  if (planted && (static_cast<int>(planted->size()) != capacity || planted->max_item() > n_items)) {
    throw Error(ErrorKind::config, "planted set must be K ids within [1, N]");
  }
}

double ExperimentConfig::resolved_epsilon() const {
  return epsilon ? *epsilon : epsilon_schedule(n_items, horizon);
}

ExperimentResult bayes_regret(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.epsilon = config.resolved_epsilon();

  std::vector<Assortment> sets;
  std::vector<std::uint64_t> set_seeds;
  if (config.planted) {
    result.prior_used = PriorMode::sample;
    result.notice = "planted elevated set; prior not sampled";
    for (int d = 0; d < config.draws; ++d) {
      sets.push_back(*config.planted);
      set_seeds.push_back(derive_seed(config.seed, static_cast<std::uint64_t>(d), 0, StreamTag::prior));
    }
  } else {
    const double family = binomial_double(config.n_items, config.capacity);
    PriorMode mode = config.prior;
    if (mode == PriorMode::automatic) {
      mode = family <= kExactPriorLimit ? PriorMode::exact : PriorMode::sample;
    }
    result.prior_used = mode;
    if (mode == PriorMode::exact) {
      if (family > 1e6) throw Error(ErrorKind::too_large, "exact prior averaging over more than 1e6 sets");
      sets = enumerate_subsets(config.n_items, config.capacity);
      set_seeds.assign(sets.size(), 0);
    } else {
      for (int d = 0; d < config.draws; ++d) {
        const auto s = derive_seed(config.seed, static_cast<std::uint64_t>(d), 0, StreamTag::prior);
        Rng rng(s);
        sets.push_back(sample_elevated_set(config.n_items, config.capacity, rng));
        set_seeds.push_back(s);
      }
    }
  }

  const std::size_t n_draws = sets.size();
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<double> regrets(n_draws * reps, 0.0);
  std::vector<char> audit_failed(n_draws * reps, 0);

  parallel_for(regrets.size(), resolve_threads(config.parallel, regrets.size()), [&](std::size_t task) {
    const std::size_t d = task / reps;
    const std::size_t r = task % reps;
    const AdversarialSpec spec(config.n_items, config.capacity, result.epsilon, sets[d]);
    const auto instance = build_instance(spec);
    auto policy = make_policy(config.policy, config.n_items, config.capacity,
                              derive_seed(config.seed, d, r, StreamTag::policy));
    const auto run = run_trajectory(*policy, instance, config.horizon,
                                    derive_seed(config.seed, d, r, StreamTag::choice),
                                    sets[d].to_string());
    regrets[task] = run.trace.cumulative;
    audit_failed[task] =
        trajectory_count_audit(run.counts, config.horizon, config.capacity).passed() ? 0 : 1;
  });

  std::vector<double> per_draw(n_draws, 0.0);
  double pooled_variance = 0.0;
  for (std::size_t d = 0; d < n_draws; ++d) {
    std::vector<double> reps_d(regrets.begin() + static_cast<std::ptrdiff_t>(d * reps),
                               regrets.begin() + static_cast<std::ptrdiff_t>((d + 1) * reps));
    per_draw[d] = std::accumulate(reps_d.begin(), reps_d.end(), 0.0) / static_cast<double>(reps);
    const double sd = sample_sd(reps_d);
    pooled_variance += sd * sd;
    result.draws.push_back({static_cast<int>(d), set_seeds[d], sets[d], per_draw[d]});
  }
  result.count_audit_failures =
      static_cast<int>(std::count(audit_failed.begin(), audit_failed.end(), char{1}));
  result.mean_regret =
      std::accumulate(per_draw.begin(), per_draw.end(), 0.0) / static_cast<double>(n_draws);

  if (result.prior_used == PriorMode::exact) {
    // Every set is averaged, so only replication noise remains.
    result.standard_error =
        reps >= 2 ? std::sqrt(pooled_variance / static_cast<double>(reps)) / static_cast<double>(n_draws)
                  : 0.0;
  } else if (n_draws >= 2) {
    result.standard_error = sample_sd(per_draw) / std::sqrt(static_cast<double>(n_draws));
  } else {
    result.standard_error =
        reps >= 2 ? std::sqrt(pooled_variance) / std::sqrt(static_cast<double>(reps)) : 0.0;
  }

  const bool counts_ok = result.count_audit_failures == 0;
  if (config.check_theorem && 4 * config.capacity <= config.n_items) {
    result.bound = theorem_lower_bound(config.n_items, config.horizon, config.capacity);
    result.margin = result.mean_regret - 2.0 * result.standard_error - result.bound->value;
    result.passed = counts_ok && *result.margin >= 0.0;
  } else {
    if (config.check_theorem) {
      if (!result.notice.empty()) result.notice += "; ";
      result.notice += "theorem comparison skipped: requires K <= N/4";
    }
    result.passed = counts_ok;
  }
  return result;
}

ScalingFit scaling_fit(const ExperimentConfig& base, const std::vector<std::int64_t>& horizons) {
  std::vector<std::int64_t> sorted = horizons;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 3 || sorted.size() != horizons.size()) {
    throw Error(ErrorKind::config, "scaling fit needs at least 3 distinct horizons");
  }
  ScalingFit fit;
  for (std::int64_t t : horizons) {
    ExperimentConfig cfg = base;
    cfg.horizon = t;
    const auto r = bayes_regret(cfg);
    fit.points.push_back({t, r.mean_regret, r.standard_error, 0.0});
    if (!(r.mean_regret > 0.0)) fit.zero_regret = true;
  }
  if (fit.zero_regret) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    for (auto& p : fit.points) p.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double m = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : fit.points) {
    sx += std::log(static_cast<double>(p.horizon));
    sy += std::log(p.mean_regret);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : fit.points) {
    const double dx = std::log(static_cast<double>(p.horizon)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.mean_regret) - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (auto& p : fit.points) {
    p.residual = std::log(p.mean_regret) -
                 (fit.intercept + fit.slope * std::log(static_cast<double>(p.horizon)));
  }
  return fit;
}

}  // namespace mnlb
