#include "mnlb/policies.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mnlb/adversarial.hpp"
#include "mnlb/errors.hpp"

namespace mnlb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorKind::config, "not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorKind::config, "not an unsigned integer: '" + s + "'");
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

PublicInstance PublicInstance::of(const MnlInstance& instance) {
  return {instance.n_items(), instance.capacity(),
          std::vector<double>(instance.revenues().begin(), instance.revenues().end())};
}

void Policy::observe(const Observation& obs) {
  if (!has_emitted_ || obs.offered != last_emitted_) {
    throw Error(ErrorKind::protocol, "observation does not match the last emitted assortment");
  }
  if (obs.outcome && !obs.offered.contains(*obs.outcome)) {
    throw Error(ErrorKind::protocol, "purchased item was not offered");
  }
  update(obs);
}

std::string FixedPolicy::name() const { return "fixed"; }

Assortment FixedPolicy::act(const PublicInstance& info) {
  if (static_cast<int>(target_.size()) > info.capacity || target_.max_item() > info.n_items) {
    throw Error(ErrorKind::protocol, "fixed target is not a valid assortment for this instance");
  }
  remember(target_);
  return target_;
}

Assortment RandomPolicy::act(const PublicInstance& info) {
  auto s = sample_elevated_set(info.n_items, info.capacity, rng_);
  remember(s);
  return s;
}

double ucb_index(const ItemStats& stats, int n_items, std::int64_t epoch, const UcbConstants& c) {
  if (stats.epochs_offered == 0) return kInf;
  const double log_term =
      std::log(std::sqrt(static_cast<double>(n_items)) * static_cast<double>(epoch) + 1.0);
  const auto t = static_cast<double>(stats.epochs_offered);
  return stats.v_hat + std::sqrt(c.variance_scale * stats.v_hat * log_term / t) +
         c.bias_scale * log_term / t;
}

Assortment ucb_assortment(const EpochUcbState& state, std::span<const double> revenues,
                          int capacity) {
  const auto n = state.items.size();
  if (revenues.size() != n) throw Error(ErrorKind::invalid_instance, "revenue vector size mismatch");
  std::vector<ItemId> unseen;
  std::vector<double> weights(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isinf(state.items[j].v_ucb)) {
      unseen.push_back(static_cast<ItemId>(j + 1));
    } else {
      weights[j] = state.items[j].v_ucb;
    }
  }
  if (static_cast<int>(unseen.size()) >= capacity) {
    unseen.resize(static_cast<std::size_t>(capacity));
    return Assortment(std::move(unseen));
  }
  const int room = capacity - static_cast<int>(unseen.size());
  const auto seen_best = best_assortment(revenues, weights, room);
  std::vector<ItemId> items = std::move(unseen);
  items.insert(items.end(), seen_best.assortment.items().begin(),
               seen_best.assortment.items().end());
  return Assortment(std::move(items));
}

EpochUcbPolicy::EpochUcbPolicy(int n_items, UcbConstants constants) : constants_(constants) {
  if (n_items < 1) throw Error(ErrorKind::invalid_instance, "policy needs N >= 1");
  state_.items.assign(static_cast<std::size_t>(n_items), ItemStats{});
  state_.tally.assign(static_cast<std::size_t>(n_items), 0);
  refresh_indices();
}

void EpochUcbPolicy::refresh_indices() {
  const int n = static_cast<int>(state_.items.size());
  for (auto& s : state_.items) s.v_ucb = ucb_index(s, n, state_.epoch, constants_);
}

Assortment EpochUcbPolicy::act(const PublicInstance& info) {
  if (info.n_items != static_cast<int>(state_.items.size())) {
    throw Error(ErrorKind::protocol, "policy was built for a different item count");
  }
  if (!state_.current) state_.current = ucb_assortment(state_, info.revenues, info.capacity);
  remember(*state_.current);
  return *state_.current;
}

void EpochUcbPolicy::update(const Observation& obs) {
  if (obs.outcome) {
    ++state_.tally[static_cast<std::size_t>(*obs.outcome - 1)];
    return;
  }
  for (ItemId id : obs.offered.items()) {
    const auto k = static_cast<std::size_t>(id - 1);
    auto& s = state_.items[k];
    ++s.epochs_offered;
    s.total_purchases += state_.tally[k];
    s.v_hat = static_cast<double>(s.total_purchases) / static_cast<double>(s.epochs_offered);
  }
  std::fill(state_.tally.begin(), state_.tally.end(), 0);
  ++state_.epoch;
  state_.current.reset();
  refresh_indices();
}

PolicySpec PolicySpec::parse(const std::string& text) {
  const auto eq = text.find('=');
  const std::string name = text.substr(0, eq);
  const std::string params = eq == std::string::npos ? std::string{} : text.substr(eq + 1);
  PolicySpec spec;
  if (name == "fixed") {
    spec.kind = PolicyKind::fixed;
    for (const auto& tok : split(params, ',')) {
      spec.items.push_back(static_cast<ItemId>(parse_u64(tok)));
    }
    (void)Assortment(spec.items);  // rejects duplicates and zero ids early
  } else if (name == "random") {
    spec.kind = PolicyKind::random;
    if (!params.empty()) spec.seed = parse_u64(params);
  } else if (name == "epoch-ucb" || name == "ucb") {
    spec.kind = PolicyKind::epoch_ucb;
    const auto parts = split(params, ',');
    if (parts.size() > 2) throw Error(ErrorKind::config, "epoch-ucb takes at most two constants");
    if (parts.size() >= 1) spec.constants.variance_scale = parse_double(parts[0]);
    if (parts.size() == 2) spec.constants.bias_scale = parse_double(parts[1]);
    if (!(spec.constants.variance_scale >= 0.0 && spec.constants.bias_scale > 0.0)) {
      throw Error(ErrorKind::config, "epoch-ucb constants must be nonnegative (bias positive)");
    }
  } else {
    throw Error(ErrorKind::config, "unknown policy '" + name + "'");
  }
  return spec;
}

std::string PolicySpec::to_string() const {
  switch (kind) {
    case PolicyKind::fixed: {
      std::string out = "fixed";
      for (std::size_t j = 0; j < items.size(); ++j) {
        out += (j == 0 ? '=' : ',');
        out += std::to_string(items[j]);
      }
      return out;
    }
    case PolicyKind::random:
      return "random=" + std::to_string(seed);
    case PolicyKind::epoch_ucb:
      return "epoch-ucb=" + format_double(constants.variance_scale) + "," +
             format_double(constants.bias_scale);
  }
  return {};
}

bool PolicySpec::operator==(const PolicySpec& other) const {
  return kind == other.kind && items == other.items && seed == other.seed &&
         constants.variance_scale == other.constants.variance_scale &&
         constants.bias_scale == other.constants.bias_scale;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, int n_items, int capacity,
                                    std::uint64_t stream_seed) {
  switch (spec.kind) {
    case PolicyKind::fixed: {
      Assortment target = spec.items.empty() ? Assortment::first(capacity) : Assortment(spec.items);
      if (static_cast<int>(target.size()) > capacity || target.max_item() > n_items) {
        throw Error(ErrorKind::config, "fixed policy target does not fit (N, K)");
      }
      return std::make_unique<FixedPolicy>(std::move(target));
    }
    case PolicyKind::random:
      return std::make_unique<RandomPolicy>(splitmix64(spec.seed ^ stream_seed));
    case PolicyKind::epoch_ucb:
      return std::make_unique<EpochUcbPolicy>(n_items, spec.constants);
  }
  throw Error(ErrorKind::config, "unknown policy kind");
}

}  // namespace mnlb
