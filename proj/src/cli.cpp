#include "ehcr/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ehcr/config.hpp"
#include "ehcr/error.hpp"
#include "ehcr/optimizer.hpp"
#include "ehcr/parallel.hpp"
#include "ehcr/simulator.hpp"

namespace ehcr::cli {

namespace {

struct Options {
  std::string config;
  std::string scheme = "probabilistic";
  std::vector<std::string> schemes;
  std::optional<double> rho;
  std::uint64_t seed = 1;
  long slots = 100000;
  std::string out;
  std::string policy;
  std::string mode = "decorrelated";
  int initial_battery = 0;
  double tau_min = 0.0;
  int lambda_count = 40;
  double pf_high = 0.999;
  double pf_low = 0.001;
  unsigned threads = 0;
  double from = 0.1;
  double to = 0.9;
  int steps = 9;
  long min_slots = 1000;
  double pd_bias = 0.0;
};

SystemParams load_with_overrides(const Options& o) {
  SystemParams p = load_params(o.config);
  if (o.rho) {
    p.pu_activity = *o.rho;
    const auto problems = validate(p);
    if (!problems.empty()) throw ConfigError(problems.front());
  }
  return p;
}

GridSpec grid_from(const Options& o, const SystemParams& p) {
  GridSpec g = default_grid(p);
  if (o.tau_min > 0.0) g.tau_min = o.tau_min;
  g.thresholds = FalseAlarmSpan{o.pf_high, o.pf_low, o.lambda_count};
  return g;
}

// Writes to --out when given, otherwise to the default stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string solution_fields(const OptimalSolution& s) {
  std::ostringstream row;
  row << format_number(s.policy.sensing_time) << ',' << format_number(s.policy.threshold) << ','
      << format_number(s.report.mu_s) << ',' << format_number(s.report.mu_p) << ','
      << format_number(s.report.p_sense) << ',' << format_number(s.report.p_access) << ','
      << format_number(s.report.mean_sensing_time);
  return row.str();
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemParams p = load_with_overrides(o);
  const Scheme scheme = parse_scheme(o.scheme);
  const OptimizeResult res = optimize(p, grid_from(o, p), scheme, o.threads);
  Sink sink(o.out, out);
  *sink << "rho,scheme,tau_star,lambda_star,mu_s,mu_p,p_S,p_A,tau_bar\n";
  if (!res.best) {
    err << "optimize: no feasible grid point (" << res.points.size() << " points evaluated)\n";
    return kExitInfeasible;
  }
  *sink << format_number(p.pu_activity) << ',' << to_string(scheme) << ',' << solution_fields(*res.best) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemParams base = load_params(o.config);
  if (!(o.from < o.to) || o.steps < 2) throw ConfigError("sweep: need from < to and steps >= 2");
  std::vector<Scheme> schemes;
  if (o.schemes.empty()) {
    schemes = {Scheme::probabilistic, Scheme::sensing_only};
  } else {
    for (const auto& s : o.schemes) schemes.push_back(parse_scheme(s));
  }
  const char* modes[] = {"nature", "rf", "mixed"};

  struct Row {
    double rho;
    const char* mode;
    Scheme scheme;
  };
  std::vector<Row> rows;
  for (int k = 0; k < o.steps; ++k) {
    const double rho = o.from + (o.to - o.from) * k / (o.steps - 1);
    for (const char* mode : modes) {
      for (Scheme s : schemes) rows.push_back({rho, mode, s});
    }
  }

  std::vector<std::string> lines(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), o.threads, [&](std::size_t k) {
    const Row& r = rows[k];
    SystemParams p = base;
    p.pu_activity = r.rho;
    if (std::string(r.mode) == "nature") p.rf_efficiency = 0.0;
    if (std::string(r.mode) == "rf") p.nature_rate = 0.0;
    std::ostringstream line;
    line << format_number(r.rho) << ',' << r.mode << ',' << to_string(r.scheme) << ',';
    try {
      const OptimizeResult res = optimize(p, grid_from(o, p), r.scheme, 1);
      if (res.best) {
        line << "optimal," << solution_fields(*res.best);
      } else {
        line << "infeasible,,,,,,,";
      }
    } catch (const std::exception& e) {
      line << "error,,,,,,,";
      errors[k] = e.what();
    }
    lines[k] = line.str();
  });

  Sink sink(o.out, out);
  *sink << "rho,harvest,scheme,status,tau_star,lambda_star,mu_s,mu_p,p_S,p_A,tau_bar\n";
  bool any_ok = false;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    *sink << lines[k] << '\n';
    if (lines[k].find(",optimal,") != std::string::npos) any_ok = true;
    if (!errors[k].empty()) err << "sweep row " << k << ": " << errors[k] << '\n';
  }
  return any_ok ? kExitOk : kExitInfeasible;
}

SimConfig sim_config_from(const Options& o) {
  SimConfig sc;
  sc.slots = o.slots;
  sc.seed = o.seed;
  sc.initial_battery = o.initial_battery;
  sc.mode = parse_correlation_mode(o.mode);
  return sc;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const SystemParams p = load_with_overrides(o);
  const Policy policy = load_policy(o.policy);
  const SimReport rep = simulate(p, policy, sim_config_from(o));
  Sink sink(o.out, out);
  *sink << "quantity,value,std_error\n";
  auto row = [&](const std::string& name, const Estimate& e) {
    *sink << name << ',' << format_number(e.value) << ',' << format_number(e.std_error) << '\n';
  };
  row("mu_p", rep.mu_p);
  row("mu_s", rep.mu_s);
  row("p_S", rep.p_sense);
  row("p_A", rep.p_access);
  for (std::size_t k = 0; k < rep.occupancy.size(); ++k) row("pi_" + std::to_string(k), rep.occupancy[k]);
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemParams p = load_with_overrides(o);
  const Policy policy = load_policy(o.policy);
  CompareOptions co;
  co.min_slots = o.min_slots;
  co.detection_bias = o.pd_bias;
  const ComparisonReport rep = compare(p, policy, sim_config_from(o), co);
  Sink sink(o.out, out);
  *sink << "quantity,analytic,empirical,std_error,z,flag\n";
  if (rep.insufficient_data) {
    *sink << "warning_insufficient_slots,,,,,warning\n";
    err << "validate: " << o.slots << " slots is below the minimum of " << o.min_slots << "; no flags raised\n";
  }
  for (const auto& r : rep.rows) {
    *sink << r.quantity << ',' << format_number(r.analytic) << ',' << format_number(r.empirical) << ','
          << format_number(r.std_error) << ',' << format_number(r.z) << ',' << (r.flagged ? "FLAG" : "ok") << '\n';
  }
  if (rep.any_flag()) {
    err << "validate: analytic and simulated values disagree beyond 3 standard errors\n";
    return kExitValidationFailed;
  }
  return kExitOk;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Probabilistic-access MAC analysis for an energy-harvesting cognitive radio"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Parameter JSON file")->required();
    sub->add_option("--out", o.out, "Write CSV here instead of stdout");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--tau-min", o.tau_min, "Sensing-time step (default 1/W)");
    sub->add_option("--lambda-count", o.lambda_count, "Thresholds per sensing time");
    sub->add_option("--pf-high", o.pf_high, "False-alarm probability at the lowest threshold");
    sub->add_option("--pf-low", o.pf_low, "False-alarm probability at the highest threshold");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--policy", o.policy, "Policy JSON file (alpha, beta1, beta2, tau, lambda)")->required();
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--slots", o.slots, "Simulated slots");
    sub->add_option("--mode", o.mode, "faithful | decorrelated");
    sub->add_option("--initial-battery", o.initial_battery, "Battery level at slot 0");
  };

  CLI::App* opt = app.add_subcommand("optimize", "Maximize the SU success rate under the PU QoS floor");
  add_common(opt);
  add_grid(opt);
  opt->add_option("--scheme", o.scheme, "probabilistic | sensing_only");
  opt->add_option("--rho", o.rho, "Override the PU activity");

  CLI::App* sweep = app.add_subcommand("sweep", "Optimize over a rho grid, schemes and harvest modes");
  add_common(sweep);
  add_grid(sweep);
  sweep->add_option("--scheme", o.schemes, "Restrict to these schemes");
  sweep->add_option("--from", o.from, "First rho");
  sweep->add_option("--to", o.to, "Last rho");
  sweep->add_option("--steps", o.steps, "Number of rho values");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo simulation of a fixed policy");
  add_common(sim);
  add_sim(sim);
  sim->add_option("--rho", o.rho, "Override the PU activity");

  CLI::App* val = app.add_subcommand("validate", "Compare analytic values with simulation");
  add_common(val);
  add_sim(val);
  val->add_option("--rho", o.rho, "Override the PU activity");
  val->add_option("--min-slots", o.min_slots, "Below this many slots no disagreement is flagged");
  val->add_option("--inject-pd-bias", o.pd_bias, "Test hook: offset added to the analytic P_D")->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (opt->parsed()) return cmd_optimize(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (sim->parsed()) return cmd_simulate(o, out, err);
    return cmd_validate(o, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitConfig;
}

}  // namespace ehcr::cli
