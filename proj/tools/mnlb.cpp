// mnlb: command-line front end for the MNL-bandit regret laboratory.
//
//   mnlb verify                      numeric certificates, exit 0 iff all pass
//   mnlb bound --n 100 --t 1e6 --k 25
//   mnlb simulate --n 16 --k 4 --t 1024 --policy epoch-ucb
//   mnlb bayes --n 16 --k 4 --t 16384 --policy random --draws 40 --reps 5
//   mnlb scaling --n 16 --k 4 --horizons 1024,4096,16384 --policy epoch-ucb

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mnlb/adversarial.hpp"
#include "mnlb/certificates.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/experiment.hpp"
#include "mnlb/report.hpp"

namespace {

using namespace mnlb;

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<std::int64_t> t;
  std::optional<std::string> epsilon;
  std::optional<std::string> policy;
  std::optional<int> draws;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> prior;
  std::optional<std::string> planted;
  std::optional<int> parallel;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool no_theorem = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool experiment_flags) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
  cmd->add_option("--n", f.n, "number of items N");
  cmd->add_option("--k", f.k, "capacity K");
  cmd->add_option("--t", f.t, "horizon T");
  cmd->add_option("--epsilon", f.epsilon, "preference gap, or 'auto' for the schedule");
  cmd->add_option("--policy", f.policy, "fixed[=ids], random[=seed], epoch-ucb[=c1,c2]");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--planted", f.planted, "elevated set as comma-separated ids");
  cmd->add_option("--out", f.out, "write the report to this path");
  cmd->add_option("--format", f.format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  if (experiment_flags) {
    cmd->add_option("--draws", f.draws, "prior draws");
    cmd->add_option("--reps", f.reps, "replications per draw");
    cmd->add_option("--prior", f.prior, "auto, sample or exact")
        ->check(CLI::IsMember({"auto", "sample", "exact"}));
    cmd->add_option("--parallel", f.parallel, "worker threads (0 = all cores)");
    cmd->add_flag("--no-theorem", f.no_theorem, "skip the lower-bound comparison");
  }
}

Assortment parse_ids(const std::string& text) {
  std::vector<ItemId> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) ids.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Assortment(std::move(ids));
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c;
  if (f.config_path) c = config_from_json(read_text_file(*f.config_path), c);
  if (f.n) c.n_items = *f.n;
  if (f.k) c.capacity = *f.k;
  if (f.t) c.horizon = *f.t;
  if (f.epsilon) {
    if (*f.epsilon == "auto") c.epsilon.reset();
    else c.epsilon = std::stod(*f.epsilon);
  }
  if (f.policy) c.policy = PolicySpec::parse(*f.policy);
  if (f.draws) c.draws = *f.draws;
  if (f.reps) c.replications = *f.reps;
  if (f.seed) c.seed = *f.seed;
  if (f.prior) c.prior = parse_prior_mode(*f.prior);
  if (f.planted) c.planted = parse_ids(*f.planted);
  if (f.parallel) c.parallel = *f.parallel;
  if (f.out) c.output_path = *f.out;
  if (f.format) c.format = parse_report_format(*f.format);
  if (f.no_theorem) c.check_theorem = false;
  c.validate();
  return c;
}

void deliver(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<std::int64_t> parse_horizons(const std::string& text) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) out.push_back(static_cast<std::int64_t>(std::stod(tok)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_verify(const std::string& format, const std::string& out) {
  const auto corpus = random_pair_corpus(1000, 50);
  const std::vector<AuditReport> reports = {
      gap_certificate(), quadratic_kl_certificate(corpus), pinsker_certificate(corpus),
      step_kl_certificate(), chain_certificate(),        count_certificate(),
  };
  const auto fmt = parse_report_format(format);
  std::string text;
  bool all = true;
  for (const auto& r : reports) {
    text += emit_report(r, fmt);
    if (fmt == ReportFormat::table) text += '\n';
    all = all && r.passed();
  }
  if (fmt == ReportFormat::table) text += all ? "ALL CHECKS PASS\n" : "SOME CHECKS FAILED\n";
  deliver(text, out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitated MNL-bandit regret laboratory"};
  app.require_subcommand(1);

  std::string verify_format = "table";
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run every numeric certificate");
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"json", "csv", "table"}));
  verify->add_option("--out", verify_out);

  CommonFlags sim_flags, bayes_flags, scaling_flags;
  auto* simulate = app.add_subcommand("simulate", "run one trajectory");
  add_common(simulate, sim_flags, false);

  auto* bayes = app.add_subcommand("bayes", "Bayes regret over the planted-set prior");
  add_common(bayes, bayes_flags, true);

  std::string horizons = "1024,4096,16384";
  auto* scaling = app.add_subcommand("scaling", "log-log regret slope against T");
  add_common(scaling, scaling_flags, true);
  scaling->add_option("--horizons", horizons, "comma-separated horizons");

  std::int64_t bound_n = 0, bound_t = 0, bound_k = 0;
  auto* bound = app.add_subcommand("bound", "print min{0.001 sqrt(NT), T/54}");
  bound->add_option("--n", bound_n)->required();
  bound->add_option("--t", bound_t)->required();
  bound->add_option("--k", bound_k)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return run_verify(verify_format, verify_out);

    if (*bound) {
      const auto b = theorem_lower_bound(bound_n, bound_t, bound_k);
      std::cout << format_real(b.value) << ' ' << to_string(b.regime) << '\n';
      return 0;
    }

    if (*simulate) {
      const auto c = resolve(sim_flags);
      const double eps = c.resolved_epsilon();
      Assortment elevated;
      if (c.planted) {
        elevated = *c.planted;
      } else {
        Rng prior(derive_seed(c.seed, 0, 0, StreamTag::prior));
        elevated = sample_elevated_set(c.n_items, c.capacity, prior);
      }
      const auto instance = build_instance(AdversarialSpec(c.n_items, c.capacity, eps, elevated));
      auto policy = make_policy(c.policy, c.n_items, c.capacity,
                                derive_seed(c.seed, 0, 0, StreamTag::policy));
      const auto run = run_trajectory(*policy, instance, c.horizon,
                                      derive_seed(c.seed, 0, 0, StreamTag::choice),
                                      elevated.to_string());
      deliver(emit_report(run, c.format), c.output_path);
      return 0;
    }

    if (*bayes) {
      const auto c = resolve(bayes_flags);
      const auto result = bayes_regret(c);
      deliver(emit_report(result, c.format), c.output_path);
      return result.passed ? 0 : 1;
    }

    if (*scaling) {
      const auto c = resolve(scaling_flags);
      const auto fit = scaling_fit(c, parse_horizons(horizons));
      deliver(emit_report(fit, c, c.format), c.output_path);
      return 0;
    }
  } catch (const mnlb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
