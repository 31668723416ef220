#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mnlb/adversarial.hpp"
#include "mnlb/divergence.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/experiment.hpp"

using namespace mnlb;

namespace {

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int m = 1; m <= k; ++m) out = out * (n - k + m) / m;
  return out;
}

// Bayes regret of the constant policy {1..K}: the overlap with a uniform elevated set is
// hypergeometric, and each round costs the closed-form gap.
double fixed_policy_oracle(int n, int k, std::int64_t t, double eps) {
  double total = 0.0;
  for (int m = 0; m <= k; ++m) {
    const double weight = choose(k, m) * choose(n - k, k - m) / choose(n, k);
    const double delta = 1.0 - double(m) / k;
    total += weight * delta * eps / ((2 + eps) * (2 + (1 - delta) * eps));
  }
  return static_cast<double>(t) * total;
}

// An assortment that is not a valid offer, to exercise the protocol guard.
class RoguePolicy final : public Policy {
 public:
  std::string name() const override { return "rogue"; }
  Assortment act(const PublicInstance& info) override {
    Assortment s = Assortment::first(info.capacity + 1);
    remember(s);
    return s;
  }

 protected:
  void update(const Observation&) override {}
};

}  // namespace

TEST_CASE("pad_assortment") {
  CHECK(pad_assortment(Assortment{2, 5, 7}, 8, 3) == Assortment{2, 5, 7});
  CHECK(pad_assortment(Assortment{}, 5, 3) == Assortment{1, 2, 3});
  CHECK(pad_assortment(Assortment{4}, 5, 3) == Assortment{1, 2, 4});
  CHECK(pad_assortment(Assortment{1, 3}, 5, 3) == Assortment{1, 2, 3});
  CHECK_THROWS_AS(pad_assortment(Assortment{1}, 2, 3), Error);
  CHECK_THROWS_AS(pad_assortment(Assortment{1, 2, 3}, 5, 2), Error);
}

TEST_CASE("run_trajectory") {
  const auto s0 = Assortment::first(5);
  const auto inst = build_instance(AdversarialSpec(10, 5, 0.5, s0));

  SUBCASE("fixed policy at the optimum has zero regret") {
    FixedPolicy p(s0);
    const auto run = run_trajectory(p, inst, 250, 3);
    CHECK(run.trace.cumulative == 0.0);
    CHECK(run.trace.step_regret.size() == 250);
  }
  SUBCASE("fixed policy at a disjoint set accrues T * 0.1 exactly") {
    FixedPolicy p(Assortment{6, 7, 8, 9, 10});
    const auto run = run_trajectory(p, inst, 100, 3);
    CHECK(run.trace.cumulative == 10.0);
    for (double r : run.trace.step_regret) CHECK(r == 0.1);
  }
  SUBCASE("fixed policy: cumulative = T * instantaneous regret") {
    const auto inst2 = build_instance(AdversarialSpec(16, 4, 0.3, Assortment{3, 6, 9, 12}));
    for (const auto& s : {Assortment{1, 2, 3, 4}, Assortment{3, 6, 9, 13}, Assortment{5}}) {
      FixedPolicy p(s);
      const auto run = run_trajectory(p, inst2, 512, 1);
      CHECK(std::abs(run.trace.cumulative - 512 * instantaneous_regret(inst2, s)) <= 1e-9);
    }
  }
  SUBCASE("traces are nonnegative, summed and reproducible") {
    for (const char* spec : {"random", "epoch-ucb"}) {
      auto a = make_policy(PolicySpec::parse(spec), 10, 5, 17);
      auto b = make_policy(PolicySpec::parse(spec), 10, 5, 17);
      const auto ra = run_trajectory(*a, inst, 2000, 99, "s0");
      const auto rb = run_trajectory(*b, inst, 2000, 99, "s0");
      CHECK(ra.trace.step_regret == rb.trace.step_regret);
      CHECK(ra.trace.realized_revenue == rb.trace.realized_revenue);
      CHECK(ra.counts == rb.counts);
      double sum = 0.0;
      for (double r : ra.trace.step_regret) {
        CHECK(r >= 0.0);
        sum += r;
      }
      CHECK(std::abs(sum - ra.trace.cumulative) <= 1e-9);
      CHECK(ra.trace.instance_ref == "s0");
      CHECK(trajectory_count_audit(ra.counts, 2000, 5).passed());
    }
  }
  SUBCASE("invalid offers are protocol errors") {
    RoguePolicy p;
    try {
      (void)run_trajectory(p, inst, 10, 1);
      FAIL("expected a protocol error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::protocol);
    }
  }
  SUBCASE("short assortments are padded in the counts") {
    FixedPolicy p(Assortment{7});
    const auto run = run_trajectory(p, inst, 40, 1);
    CHECK(run.counts.n_raw[6] == 40);
    CHECK(run.counts.n_padded[0] == 40);
    CHECK(run.counts.n_raw[0] == 0);
    CHECK(std::accumulate(run.counts.n_padded.begin(), run.counts.n_padded.end(), std::int64_t{0}) == 200);
  }
}

TEST_CASE("experiment config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  auto expect_config = [](ExperimentConfig bad) {
    try {
      bad.validate();
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
    }
  };
  auto c1 = c; c1.replications = 0; expect_config(c1);
  auto c2 = c; c2.draws = 0; expect_config(c2);
  auto c3 = c; c3.capacity = 20; expect_config(c3);
  auto c4 = c; c4.epsilon = 0.7; expect_config(c4);
  auto c5 = c; c5.planted = Assortment{1, 2}; expect_config(c5);
  auto c6 = c; c6.horizon = 0; expect_config(c6);
  CHECK(c.resolved_epsilon() == epsilon_schedule(16, 1024));
  c.epsilon = 0.25;
  CHECK(c.resolved_epsilon() == 0.25);
  CHECK(parse_prior_mode("exact") == PriorMode::exact);
  CHECK_THROWS_AS(parse_prior_mode("all"), Error);
}

TEST_CASE("bayes_regret") {
  ExperimentConfig c;
  c.policy = PolicySpec::parse("fixed");
  c.parallel = 2;

  SUBCASE("exact enumeration equals the hypergeometric oracle") {
    c.prior = PriorMode::exact;
    const auto r = bayes_regret(c);
    CHECK(r.prior_used == PriorMode::exact);
    CHECK(r.draws.size() == 1820);
    const double oracle = fixed_policy_oracle(16, 4, 1024, r.epsilon);
    CHECK(std::abs(r.mean_regret - oracle) <= 1e-9 * oracle);
    CHECK(r.standard_error == 0.0);
    REQUIRE(r.bound);
    CHECK(std::abs(r.bound->value - 0.128) <= 1e-15);
    CHECK(r.count_audit_failures == 0);
  }
  SUBCASE("automatic mode enumerates small families") {
    c.horizon = 64;
    CHECK(bayes_regret(c).prior_used == PriorMode::exact);
    c.n_items = 40;
    c.capacity = 6;
    CHECK(bayes_regret(c).prior_used == PriorMode::sample);
  }
  SUBCASE("sampled prior is close to the oracle") {
    c.prior = PriorMode::sample;
    c.draws = 400;
    const auto r = bayes_regret(c);
    CHECK(r.draws.size() == 400);
    CHECK(r.standard_error > 0.0);
    const double oracle = fixed_policy_oracle(16, 4, 1024, r.epsilon);
    CHECK(std::abs(r.mean_regret - oracle) <= 3 * r.standard_error);
  }
  SUBCASE("margin is mean - 2 SE - bound") {
    c.prior = PriorMode::sample;
    c.policy = PolicySpec::parse("random");
    c.replications = 3;
    const auto r = bayes_regret(c);
    REQUIRE(r.margin);
    CHECK(*r.margin == r.mean_regret - 2 * r.standard_error - r.bound->value);
    CHECK(r.passed == (*r.margin >= 0));
  }
  SUBCASE("theorem comparison is skipped when K > N/4") {
    c.n_items = 10;
    c.capacity = 5;
    c.horizon = 100;
    const auto r = bayes_regret(c);
    CHECK_FALSE(r.bound);
    CHECK_FALSE(r.margin);
    CHECK(r.notice.find("skipped") != std::string::npos);
    CHECK(r.passed);
  }
  SUBCASE("planted set is used for every draw") {
    c.planted = Assortment{1, 2, 3, 4};
    c.draws = 5;
    const auto r = bayes_regret(c);
    CHECK(r.mean_regret == 0.0);
    for (const auto& d : r.draws) CHECK(d.elevated_set == Assortment{1, 2, 3, 4});
  }
  SUBCASE("independent of the worker count") {
    c.prior = PriorMode::sample;
    c.policy = PolicySpec::parse("epoch-ucb");
    c.replications = 3;
    c.draws = 6;
    c.parallel = 1;
    const auto serial = bayes_regret(c);
    c.parallel = 4;
    const auto threaded = bayes_regret(c);
    CHECK(serial.mean_regret == threaded.mean_regret);
    CHECK(serial.standard_error == threaded.standard_error);
    for (std::size_t d = 0; d < serial.draws.size(); ++d) {
      CHECK(serial.draws[d].cum_regret == threaded.draws[d].cum_regret);
      CHECK(serial.draws[d].seed == threaded.draws[d].seed);
    }
  }
}

TEST_CASE("scaling_fit") {
  ExperimentConfig c;
  c.prior = PriorMode::sample;
  c.draws = 10;

  SUBCASE("constant suboptimal policy grows linearly") {
    c.policy = PolicySpec::parse("fixed");
    c.epsilon = 0.5;
    const auto fit = scaling_fit(c, {256, 1024, 4096});
    CHECK(std::abs(fit.slope - 1.0) <= 1e-9);
    CHECK_FALSE(fit.zero_regret);
    for (const auto& p : fit.points) CHECK(std::abs(p.residual) <= 1e-9);
  }
  SUBCASE("optimal policy has zero regret and no slope") {
    c.policy = PolicySpec::parse("fixed");
    c.planted = Assortment{1, 2, 3, 4};
    const auto fit = scaling_fit(c, {100, 200, 400});
    CHECK(fit.zero_regret);
    CHECK(std::isnan(fit.slope));
  }
  SUBCASE("degenerate grids") {
    CHECK_THROWS_AS(scaling_fit(c, {100, 200}), Error);
    CHECK_THROWS_AS(scaling_fit(c, {100, 100, 200}), Error);
  }
}
