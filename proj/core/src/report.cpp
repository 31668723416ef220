#include "mnlb/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mnlb/errors.hpp"

namespace mnlb {

namespace {

using Json = nlohmann::ordered_json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_real(v).c_str(), nullptr);
}

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

Json items_json(const Assortment& s) {
  Json a = Json::array();
  for (ItemId id : s.items()) a.push_back(id);
  return a;
}

Assortment items_from_json(const Json& j) {
  return Assortment(j.get<std::vector<ItemId>>());
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["n"] = c.n_items;
  j["k"] = c.capacity;
  j["t"] = c.horizon;
  j["policy"] = c.policy.to_string();
  j["epsilon"] = c.epsilon ? real(*c.epsilon) : Json("auto");
  j["draws"] = c.draws;
  j["reps"] = c.replications;
  j["seed"] = c.seed;
  j["prior"] = to_string(c.prior);
  j["planted"] = c.planted ? items_json(*c.planted) : Json(nullptr);
  j["check_theorem"] = c.check_theorem;
  return j;
}

void apply_config(const Json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw Error(ErrorKind::config, "config document must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "n") c.n_items = value.get<int>();
    else if (key == "k") c.capacity = value.get<int>();
    else if (key == "t") c.horizon = value.get<std::int64_t>();
    else if (key == "policy") c.policy = PolicySpec::parse(value.get<std::string>());
    else if (key == "epsilon") {
      if (value.is_string() && value.get<std::string>() == "auto") c.epsilon.reset();
      else if (value.is_number()) c.epsilon = value.get<double>();
      else throw Error(ErrorKind::config, "epsilon must be a number or \"auto\"");
    }
    else if (key == "draws") c.draws = value.get<int>();
    else if (key == "reps") c.replications = value.get<int>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else if (key == "prior") c.prior = parse_prior_mode(value.get<std::string>());
    else if (key == "planted") {
      if (value.is_null()) c.planted.reset();
      else c.planted = items_from_json(value);
    }
    else if (key == "check_theorem") c.check_theorem = value.get<bool>();
    else if (key == "parallel") c.parallel = value.get<int>();
    else if (key == "out") c.output_path = value.get<std::string>();
    else if (key == "format") c.format = parse_report_format(value.get<std::string>());
    else throw Error(ErrorKind::config, "unknown config key '" + key + "'");
  }
}

Json bound_json(const LowerBoundValue& b) {
  Json j;
  j["value"] = real(b.value);
  j["constant_c"] = real(b.constant_c);
  j["regime"] = std::string(to_string(b.regime));
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Fixed-width text table; columns are padded to the widest cell.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << (c == 0 ? "" : "  ") << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    os << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : rows) line(row);
  return os.str();
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string emit_report(const ExperimentResult& result, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: {
      Json j;
      j["schema"] = "mnlb.bayes/1";
      j["seed_scheme"] = kSeedScheme;
      j["config"] = config_json(result.config);
      Json s;
      s["epsilon"] = real(result.epsilon);
      s["prior_used"] = to_string(result.prior_used);
      s["draws"] = result.draws.size();
      s["mean_regret"] = real(result.mean_regret);
      s["standard_error"] = real(result.standard_error);
      s["bound"] = result.bound ? bound_json(*result.bound) : Json(nullptr);
      s["margin"] = result.margin ? real(*result.margin) : Json(nullptr);
      s["passed"] = result.passed;
      s["count_audit_failures"] = result.count_audit_failures;
      s["notice"] = result.notice;
      j["summary"] = s;
      Json rows = Json::array();
      for (const auto& d : result.draws) {
        Json r;
        r["draw_id"] = d.draw_id;
        r["seed"] = d.seed;
        r["elevated_set"] = items_json(d.elevated_set);
        r["cum_regret"] = real(d.cum_regret);
        rows.push_back(r);
      }
      j["draws"] = rows;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "draw_id,seed,elevated_set,cum_regret\n";
      for (const auto& d : result.draws) {
        out += std::to_string(d.draw_id) + "," + std::to_string(d.seed) + "," +
               d.elevated_set.to_string() + "," + format_real(d.cum_regret) + "\n";
      }
      return out;
    }
    case ReportFormat::table: {
      std::ostringstream os;
      const auto& c = result.config;
      os << "# seed scheme: " << kSeedScheme << '\n';
      os << "N=" << c.n_items << " K=" << c.capacity << " T=" << c.horizon
         << " policy=" << c.policy.to_string() << " epsilon=" << format_real(result.epsilon)
         << " prior=" << to_string(result.prior_used) << " draws=" << result.draws.size()
         << " reps=" << c.replications << " seed=" << c.seed << '\n';
      os << "mean regret     " << format_real(result.mean_regret) << '\n';
      os << "standard error  " << format_real(result.standard_error) << '\n';
      if (result.bound) {
        os << "lower bound     " << format_real(result.bound->value) << " ("
           << to_string(result.bound->regime) << ")\n";
        os << "mean-2SE-bound  " << format_real(*result.margin) << '\n';
      }
      os << "count audits    " << (result.count_audit_failures == 0 ? "ok" : "FAILED") << '\n';
      os << "status          " << (result.passed ? "PASS" : "FAIL") << '\n';
      if (!result.notice.empty()) os << "notice          " << result.notice << '\n';
      std::vector<std::vector<std::string>> rows;
      for (const auto& d : result.draws) {
        rows.push_back({std::to_string(d.draw_id), std::to_string(d.seed), d.elevated_set.to_string(),
                        format_real(d.cum_regret)});
      }
      os << '\n' << render_table({"draw_id", "seed", "elevated_set", "cum_regret"}, rows);
      return os.str();
    }
  }
  return {};
}

std::string emit_report(const AuditReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: {
      Json j;
      j["title"] = report.title();
      j["passed"] = report.passed();
      Json rows = Json::array();
      for (const auto& c : report.checks()) {
        Json r;
        r["name"] = c.name;
        r["exact"] = real(c.exact);
        r["bound"] = real(c.bound);
        r["margin"] = real(c.margin);
        r["pass"] = c.pass;
        r["note"] = c.note;
        rows.push_back(r);
      }
      j["checks"] = rows;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "name,exact,bound,margin,pass\n";
      for (const auto& c : report.checks()) {
        out += c.name + "," + format_real(c.exact) + "," + format_real(c.bound) + "," +
               format_real(c.margin) + "," + (c.pass ? "PASS" : "FAIL") + "\n";
      }
      return out;
    }
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> rows;
      for (const auto& c : report.checks()) {
        rows.push_back({c.name, format_real(c.exact), format_real(c.bound), format_real(c.margin),
                        c.pass ? "PASS" : "FAIL"});
      }
      std::string out;
      if (!report.title().empty()) out += "== " + report.title() + " ==\n";
      out += render_table({"check", "exact", "bound", "margin", "status"}, rows);
      return out;
    }
  }
  return {};
}

std::string emit_report(const ScalingFit& fit, const ExperimentConfig& base, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: {
      Json j;
      j["schema"] = "mnlb.scaling/1";
      j["seed_scheme"] = kSeedScheme;
      j["config"] = config_json(base);
      Json pts = Json::array();
      for (const auto& p : fit.points) {
        Json r;
        r["t"] = p.horizon;
        r["mean_regret"] = real(p.mean_regret);
        r["standard_error"] = real(p.standard_error);
        r["residual"] = real(p.residual);
        pts.push_back(r);
      }
      j["points"] = pts;
      j["slope"] = real(fit.slope);
      j["intercept"] = real(fit.intercept);
      j["zero_regret"] = fit.zero_regret;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "t,mean_regret,standard_error,residual\n";
      for (const auto& p : fit.points) {
        out += std::to_string(p.horizon) + "," + format_real(p.mean_regret) + "," +
               format_real(p.standard_error) + "," + format_real(p.residual) + "\n";
      }
      return out;
    }
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> rows;
      for (const auto& p : fit.points) {
        rows.push_back({std::to_string(p.horizon), format_real(p.mean_regret),
                        format_real(p.standard_error), format_real(p.residual)});
      }
      std::string out = "# seed scheme: " + std::string(kSeedScheme) + "\n";
      out += "policy=" + base.policy.to_string() + " N=" + std::to_string(base.n_items) +
             " K=" + std::to_string(base.capacity) + "\n";
      out += render_table({"T", "mean_regret", "standard_error", "residual"}, rows);
      out += fit.zero_regret ? "slope: undefined (zero regret)\n"
                             : "slope: " + format_real(fit.slope) + "\n";
      return out;
    }
  }
  return {};
}

std::string emit_report(const Trajectory& trajectory, ReportFormat format) {
  const auto& tr = trajectory.trace;
  switch (format) {
    case ReportFormat::json: {
      Json j;
      j["schema"] = "mnlb.trajectory/1";
      j["policy"] = tr.policy_id;
      j["seed"] = tr.seed;
      j["instance"] = tr.instance_ref;
      j["horizon"] = tr.step_regret.size();
      j["cum_regret"] = real(tr.cumulative);
      j["realized_revenue"] = real(tr.realized_revenue);
      j["n_raw"] = trajectory.counts.n_raw;
      j["n_padded"] = trajectory.counts.n_padded;
      Json steps = Json::array();
      for (double r : tr.step_regret) steps.push_back(real(r));
      j["step_regret"] = steps;
      return dump(j);
    }
    case ReportFormat::csv: {
      std::string out = "t,step_regret,cum_regret\n";
      double cum = 0.0;
      for (std::size_t t = 0; t < tr.step_regret.size(); ++t) {
        cum += tr.step_regret[t];
        out += std::to_string(t + 1) + "," + format_real(tr.step_regret[t]) + "," +
               format_real(cum) + "\n";
      }
      return out;
    }
    case ReportFormat::table: {
      std::ostringstream os;
      os << "policy=" << tr.policy_id << " seed=" << tr.seed << " elevated=" << tr.instance_ref
         << " T=" << tr.step_regret.size() << '\n';
      os << "cumulative pseudo-regret  " << format_real(tr.cumulative) << '\n';
      os << "realized revenue          " << format_real(tr.realized_revenue) << "\n\n";
      std::vector<std::vector<std::string>> rows;
      for (std::size_t j = 0; j < trajectory.counts.n_raw.size(); ++j) {
        rows.push_back({std::to_string(j + 1), std::to_string(trajectory.counts.n_raw[j]),
                        std::to_string(trajectory.counts.n_padded[j])});
      }
      os << render_table({"item", "N_i", "N~_i"}, rows);
      return os.str();
    }
  }
  return {};
}

ExperimentResult parse_experiment_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed report: ") + e.what());
  }
  try {
    ExperimentResult r;
    apply_config(j.at("config"), r.config);
    const auto& s = j.at("summary");
    r.epsilon = s.at("epsilon").get<double>();
    r.prior_used = parse_prior_mode(s.at("prior_used").get<std::string>());
    r.mean_regret = s.at("mean_regret").get<double>();
    r.standard_error = s.at("standard_error").get<double>();
    if (!s.at("bound").is_null()) {
      const auto& b = s.at("bound");
      LowerBoundValue lb;
      lb.value = b.at("value").get<double>();
      lb.constant_c = b.at("constant_c").get<double>();
      lb.regime = b.at("regime").get<std::string>() == "SQRT_NT" ? BoundRegime::sqrt_nt
                                                                 : BoundRegime::linear_t;
      r.bound = lb;
    }
    if (!s.at("margin").is_null()) r.margin = s.at("margin").get<double>();
    r.passed = s.at("passed").get<bool>();
    r.count_audit_failures = s.at("count_audit_failures").get<int>();
    r.notice = s.at("notice").get<std::string>();
    for (const auto& d : j.at("draws")) {
      r.draws.push_back({d.at("draw_id").get<int>(), d.at("seed").get<std::uint64_t>(),
                         items_from_json(d.at("elevated_set")), d.at("cum_regret").get<double>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed report: ") + e.what());
  }
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base) {
  try {
    apply_config(Json::parse(text), base);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::config, std::string("malformed config: ") + e.what());
  }
  return base;
}

std::string config_to_json(const ExperimentConfig& config) { return dump(config_json(config)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace mnlb
