#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "mnlb/adversarial.hpp"
#include "mnlb/errors.hpp"
#include "mnlb/report.hpp"

using namespace mnlb;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

ExperimentResult small_result() {
  ExperimentConfig c;
  c.horizon = 200;
  c.draws = 7;
  c.replications = 2;
  c.prior = PriorMode::sample;
  c.policy = PolicySpec::parse("random=5");
  c.seed = 31;
  return bayes_regret(c);
}

}  // namespace

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(10.0) == "10");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("bayes CSV schema") {
  const auto r = small_result();
  const auto csv = emit_report(r, ReportFormat::csv);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "draw_id,seed,elevated_set,cum_regret");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 3);
    CHECK(lines[i].rfind(std::to_string(i - 1) + ",", 0) == 0);
  }
}

TEST_CASE("empty result keeps its header") {
  ExperimentResult empty;
  CHECK(emit_report(empty, ReportFormat::csv) == "draw_id,seed,elevated_set,cum_regret\n");
  const auto doc = nlohmann::json::parse(emit_report(empty, ReportFormat::json));
  CHECK(doc.at("draws").empty());
  CHECK(doc.contains("summary"));
  CHECK(emit_report(AuditReport("none"), ReportFormat::csv) == "name,exact,bound,margin,pass\n");
  CHECK_FALSE(emit_report(empty, ReportFormat::table).empty());
}

TEST_CASE("JSON round trip") {
  const auto r = small_result();
  const auto text = emit_report(r, ReportFormat::json);
  const auto back = parse_experiment_json(text);
  CHECK(emit_report(back, ReportFormat::json) == text);
  CHECK(back.config.n_items == r.config.n_items);
  CHECK(back.config.policy == r.config.policy);
  CHECK(back.config.seed == r.config.seed);
  CHECK(back.prior_used == r.prior_used);
  CHECK(back.passed == r.passed);
  CHECK(back.mean_regret == doctest::Approx(r.mean_regret).epsilon(1e-11));
  CHECK(back.standard_error == doctest::Approx(r.standard_error).epsilon(1e-11));
  REQUIRE(back.draws.size() == r.draws.size());
  for (std::size_t d = 0; d < r.draws.size(); ++d) {
    CHECK(back.draws[d].seed == r.draws[d].seed);
    CHECK(back.draws[d].elevated_set == r.draws[d].elevated_set);
    CHECK(back.draws[d].cum_regret == doctest::Approx(r.draws[d].cum_regret).epsilon(1e-11));
  }
  REQUIRE(back.bound);
  CHECK(back.bound->value == doctest::Approx(r.bound->value).epsilon(1e-11));
  CHECK_THROWS_AS(parse_experiment_json("{"), Error);
  CHECK_THROWS_AS(parse_experiment_json("{}"), Error);
}

TEST_CASE("reports are byte-identical for identical inputs") {
  const auto a = small_result();
  const auto b = small_result();
  for (auto f : {ReportFormat::json, ReportFormat::csv, ReportFormat::table}) {
    CHECK(emit_report(a, f) == emit_report(b, f));
  }
}

TEST_CASE("audit report formats") {
  AuditReport r("demo");
  r.add_upper("ok", 1.0, 2.0);
  r.add_lower("bad", 1.0, 2.0);
  const auto csv = lines_of(emit_report(r, ReportFormat::csv));
  REQUIRE(csv.size() == 3);
  CHECK(csv[1] == "ok,1,2,1,PASS");
  CHECK(csv[2] == "bad,1,2,-1,FAIL");
  const auto doc = nlohmann::json::parse(emit_report(r, ReportFormat::json));
  CHECK(doc.at("passed") == false);
  CHECK(doc.at("checks").size() == 2);
  const auto table = emit_report(r, ReportFormat::table);
  CHECK(table.find("FAIL") != std::string::npos);
  CHECK(table.find("== demo ==") == 0);
}

TEST_CASE("config documents") {
  const auto c = config_from_json(
      R"({"n": 20, "k": 5, "t": 4096, "policy": "random=3", "epsilon": 0.2, "draws": 9,
          "reps": 2, "seed": 11, "prior": "exact", "planted": [1, 2, 3, 4, 5],
          "check_theorem": false, "parallel": 3, "format": "csv"})");
  CHECK(c.n_items == 20);
  CHECK(c.capacity == 5);
  CHECK(c.horizon == 4096);
  CHECK(c.policy == PolicySpec::parse("random=3"));
  CHECK(c.epsilon == 0.2);
  CHECK(c.draws == 9);
  CHECK(c.replications == 2);
  CHECK(c.seed == 11);
  CHECK(c.prior == PriorMode::exact);
  CHECK(c.planted == Assortment::first(5));
  CHECK_FALSE(c.check_theorem);
  CHECK(c.parallel == 3);
  CHECK(c.format == ReportFormat::csv);

  const auto back = config_from_json(config_to_json(c));
  CHECK(back.n_items == 20);
  CHECK(back.policy == c.policy);
  CHECK(back.planted == c.planted);

  CHECK_FALSE(config_from_json(R"({"epsilon": "auto"})", c).epsilon);
  const auto keep = config_from_json(R"({"t": 10})", c);
  CHECK(keep.n_items == 20);
  CHECK(keep.horizon == 10);

  CHECK_THROWS_AS(config_from_json(R"({"horizon": 5})"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"n": "five"})"), Error);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), Error);
  CHECK_THROWS_AS(config_from_json(R"({"epsilon": true})"), Error);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "mnlb_report_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_text_file(path, "a,b\n1,2\n");
  CHECK(read_text_file(path) == "a,b\n1,2\n");
  std::filesystem::remove_all(dir);
  try {
    write_text_file((dir / "missing" / "x.csv").string(), "x");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  CHECK_THROWS_AS(read_text_file((dir / "nope").string()), Error);
}
