#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "mnlb/adversarial.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/experiment.hpp"
#include "mnlb/policies.hpp"

using namespace mnlb;

namespace {

PublicInstance uniform_public(int n, int k) { return {n, k, std::vector<double>(static_cast<std::size_t>(n), 1.0)}; }

EpochUcbState seen_state(const std::vector<double>& v_ucb) {
  EpochUcbState st;
  for (double v : v_ucb) {
    ItemStats s;
    s.epochs_offered = 1;
    s.v_hat = v;
    s.v_ucb = v;
    st.items.push_back(s);
  }
  st.tally.assign(v_ucb.size(), 0);
  return st;
}

}  // namespace

TEST_CASE("fixed policy") {
  FixedPolicy p(Assortment::first(3));
  const auto info = uniform_public(6, 3);
  for (int t = 0; t < 5; ++t) {
    const auto s = p.act(info);
    CHECK(s == Assortment::first(3));
    p.observe({s, t % 2 ? Outcome{2} : kNoPurchase, t});
  }
  FixedPolicy too_big(Assortment{1, 2, 3, 4});
  CHECK_THROWS_AS(too_big.act(info), Error);
}

TEST_CASE("random policy is uniform over size-K subsets") {
  RandomPolicy p(2718);
  const auto info = uniform_public(5, 2);
  std::map<Assortment, int> hits;
  constexpr int kCalls = 100000;
  for (int t = 0; t < kCalls; ++t) {
    const auto s = p.act(info);
    CHECK(s.size() == 2);
    hits[s]++;
    p.observe({s, kNoPurchase, t});
  }
  REQUIRE(hits.size() == 10);
  const double sigma = std::sqrt(0.1 * 0.9 / kCalls);
  for (const auto& [s, c] : hits) CHECK(std::abs(c / double(kCalls) - 0.1) <= 4 * sigma);
}

TEST_CASE("observation protocol") {
  EpochUcbPolicy p(6);
  const auto info = uniform_public(6, 2);
  auto expect_protocol = [&](const Observation& obs) {
    try {
      p.observe(obs);
      FAIL("expected a protocol error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::protocol);
    }
  };
  expect_protocol({Assortment{1, 2}, kNoPurchase, 0});  // nothing emitted yet
  const auto s = p.act(info);
  CHECK(s == Assortment{1, 2});
  expect_protocol({Assortment{1, 3}, kNoPurchase, 0});
  expect_protocol({s, Outcome{5}, 0});
  CHECK_NOTHROW(p.observe({s, Outcome{1}, 0}));
}

TEST_CASE("epoch-UCB bookkeeping") {
  const auto info = uniform_public(6, 2);

  SUBCASE("all unseen starts with the first K items") {
    EpochUcbPolicy p(6);
    CHECK(p.act(info) == Assortment{1, 2});
    for (const auto& s : p.state().items) CHECK(std::isinf(s.v_ucb));
  }

  SUBCASE("mid-epoch the assortment repeats") {
    EpochUcbPolicy p(6);
    const auto s = p.act(info);
    for (int t = 0; t < 5; ++t) {
      p.observe({s, Outcome{1 + t % 2}, t});
      CHECK(p.act(info) == s);
      CHECK(p.state().epoch == 1);
    }
  }

  SUBCASE("(i, i, no purchase) gives v_hat = 2") {
    EpochUcbPolicy p(6);
    const auto s = p.act(info);
    p.observe({s, Outcome{1}, 0});
    CHECK(p.act(info) == s);
    p.observe({s, Outcome{1}, 1});
    CHECK(p.act(info) == s);
    p.observe({s, kNoPurchase, 2});
    const auto& st = p.state();
    CHECK(st.epoch == 2);
    CHECK(st.items[0].epochs_offered == 1);
    CHECK(st.items[0].total_purchases == 2);
    CHECK(st.items[0].v_hat == 2.0);
    CHECK(st.items[1].v_hat == 0.0);
    CHECK(st.items[1].epochs_offered == 1);
    CHECK(std::isinf(st.items[2].v_ucb));
    // The next epoch explores the unseen items.
    CHECK(p.act(info) == Assortment{3, 4});
  }

  SUBCASE("empty epoch pulls v_hat toward zero") {
    EpochUcbPolicy p(4);
    const auto info4 = uniform_public(4, 2);
    auto s = p.act(info4);
    p.observe({s, Outcome{2}, 0});
    p.observe({s, kNoPurchase, 1});
    CHECK(p.state().items[1].v_hat == 1.0);
    s = p.act(info4);  // {3, 4}
    p.observe({s, kNoPurchase, 2});
    s = p.act(info4);
    REQUIRE(s.contains(2));
    p.observe({s, kNoPurchase, 3});
    CHECK(p.state().items[1].v_hat == 0.5);
  }

  SUBCASE("v_ucb >= v_hat and the bonus shrinks with T_i") {
    const UcbConstants c;
    for (double v : {0.0, 0.3, 1.7}) {
      double prev = std::numeric_limits<double>::infinity();
      for (std::int64_t t = 1; t <= 1000; t *= 2) {
        ItemStats s;
        s.epochs_offered = t;
        s.v_hat = v;
        const double idx = ucb_index(s, 16, 50, c);
        CHECK(idx >= v);
        CHECK(idx - v <= prev);
        prev = idx - v;
      }
    }
    ItemStats s;
    s.epochs_offered = 4;
    s.v_hat = 0.5;
    const double lg = std::log(std::sqrt(9.0) * 7 + 1);
    CHECK(std::abs(ucb_index(s, 9, 7, c) - (0.5 + std::sqrt(48 * 0.5 * lg / 4) + 48 * lg / 4)) <= 1e-12);
  }
}

TEST_CASE("ucb_assortment") {
  SUBCASE("equal revenues take the K largest indices") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + static_cast<int>(uniform01(rng) * 11);
      const int k = 1 + static_cast<int>(uniform01(rng) * n);
      std::vector<double> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = 0.01 + 2 * uniform01(rng);
      const std::vector<double> r(static_cast<std::size_t>(n), 0.8);
      const auto st = seen_state(v);
      const auto got = ucb_assortment(st, r, k);
      std::vector<std::pair<double, ItemId>> order;
      for (int j = 0; j < n; ++j) order.emplace_back(-v[static_cast<std::size_t>(j)], j + 1);
      std::sort(order.begin(), order.end());
      std::vector<ItemId> top;
      for (int j = 0; j < k; ++j) top.push_back(order[static_cast<std::size_t>(j)].second);
      CHECK(got == Assortment(top));
    }
  }
  SUBCASE("true weights of a planted instance recover the planted set") {
    const Assortment planted{2, 5, 9};
    const auto inst = build_instance(AdversarialSpec(12, 3, 0.2, planted));
    const auto st = seen_state({inst.preferences().begin(), inst.preferences().end()});
    CHECK(ucb_assortment(st, inst.revenues(), 3) == planted);
  }
  SUBCASE("unseen items first, leftover capacity optimized") {
    auto st = seen_state({0.1, 0.9, 0.5, 0.2});
    st.items[3].v_ucb = std::numeric_limits<double>::infinity();
    CHECK(ucb_assortment(st, std::vector<double>(4, 1.0), 2) == Assortment{2, 4});
  }
  SUBCASE("non-uniform revenues above the enumeration guard") {
    std::vector<double> r(30, 0.5);
    r[0] = 1.0;
    const auto st = seen_state(std::vector<double>(30, 0.5));
    CHECK_THROWS_AS(ucb_assortment(st, r, 3), Error);
  }
}

TEST_CASE("policy specs") {
  CHECK(PolicySpec::parse("fixed").kind == PolicyKind::fixed);
  CHECK(PolicySpec::parse("fixed=3,1").items == std::vector<ItemId>{3, 1});
  CHECK(PolicySpec::parse("random=7").seed == 7);
  const auto ucb = PolicySpec::parse("epoch-ucb=2,3.5");
  CHECK(ucb.kind == PolicyKind::epoch_ucb);
  CHECK(ucb.constants.variance_scale == 2.0);
  CHECK(ucb.constants.bias_scale == 3.5);
  CHECK(PolicySpec::parse("ucb").constants.variance_scale == 48.0);
  for (const char* text : {"fixed=1,2,5", "random=99", "epoch-ucb=48,48", "fixed"}) {
    const auto spec = PolicySpec::parse(text);
    CHECK(PolicySpec::parse(spec.to_string()) == spec);
  }
  CHECK_THROWS_AS(PolicySpec::parse("greedy"), Error);
  CHECK_THROWS_AS(PolicySpec::parse("fixed=1,1"), Error);
  CHECK_THROWS_AS(PolicySpec::parse("epoch-ucb=a"), Error);
  CHECK_THROWS_AS(PolicySpec::parse("epoch-ucb=1,2,3"), Error);

  const auto fixed = make_policy(PolicySpec::parse("fixed"), 8, 3, 0);
  CHECK(fixed->act(uniform_public(8, 3)) == Assortment::first(3));
  CHECK(make_policy(PolicySpec::parse("random"), 8, 3, 1)->name() == "random");
  CHECK(make_policy(PolicySpec::parse("ucb"), 8, 3, 1)->name() == "epoch-ucb");
}

namespace {

// Mean padded offers of planted minus non-planted items, per replication, and its SE.
std::pair<double, double> planted_offer_excess(double eps, std::uint64_t master) {
  constexpr int kN = 16, kK = 4, kReps = 40;
  constexpr std::int64_t kT = 16384;
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t rep = 0; rep < kReps; ++rep) {
    Rng prior(derive_seed(master, rep, 0, StreamTag::prior));
    const auto planted = sample_elevated_set(kN, kK, prior);
    const auto inst = build_instance(AdversarialSpec(kN, kK, eps, planted));
    EpochUcbPolicy policy(kN);
    const auto run = run_trajectory(policy, inst, kT, derive_seed(master, rep, 0, StreamTag::choice));
    double in = 0.0, out = 0.0;
    for (int i = 1; i <= kN; ++i) {
      (planted.contains(i) ? in : out) += static_cast<double>(run.counts.n_padded[static_cast<std::size_t>(i - 1)]);
    }
    const double d = in / kK - out / (kN - kK);
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / kReps;
  const double sd = std::sqrt((sum_sq - kReps * mean * mean) / (kReps - 1));
  return {mean, sd / std::sqrt(double(kReps))};
}

}  // namespace

TEST_CASE("epoch-UCB concentrates offers on the planted set") {
  // With a detectable gap the planted items are offered far more often.
  const auto [excess, se] = planted_offer_excess(0.5, 2024);
  MESSAGE("eps = 0.5: planted excess " << excess << " (SE " << se << ")");
  CHECK(excess > 4 * se);
  CHECK(excess > 1000);

  // At the scheduled eps (0.0015625 here) the excess is indistinguishable from zero over
  // 40 replications; it is reported, not asserted.
  const auto [sched, sched_se] = planted_offer_excess(epsilon_schedule(16, 16384), 2024);
  MESSAGE("scheduled eps: planted excess " << sched << " (SE " << sched_se << ")");
  CHECK(std::abs(sched) < 5 * sched_se);
}
