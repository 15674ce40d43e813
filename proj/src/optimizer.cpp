#include "ehcr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "ehcr/error.hpp"
#include "ehcr/numerics.hpp"
#include "ehcr/parallel.hpp"

namespace ehcr {

namespace {

struct VariableLayout {
  int num_states = 0;
  int alpha_offset = -1;  // -1 when absent
  int beta1_offset = -1;
  int beta2_offset = 0;
  int num_vars = 0;
};

VariableLayout variable_layout(const ActionLayout& lay, Scheme scheme) {
  VariableLayout v;
  v.num_states = lay.num_states();
  int next = v.num_states;
  if (scheme == Scheme::probabilistic) {
    v.alpha_offset = next;
    next += lay.alpha_size();
    v.beta1_offset = next;
    next += lay.beta_size();
  }
  v.beta2_offset = next;
  next += lay.beta_size();
  v.num_vars = next;
  return v;
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("threshold grid: need 0 < low <= high, count >= 1");
  std::vector<double> out;
  if (count == 1) return {lo};
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) out.push_back(lo * std::exp(step * k));
  return out;
}

double safe_ratio(double num, double den) {
  return den > kRecoveryFloor ? std::clamp(num / den, 0.0, 1.0) : 0.0;
}

}  // namespace

const char* to_string(Scheme scheme) {
  return scheme == Scheme::probabilistic ? "probabilistic" : "sensing_only";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "probabilistic") return Scheme::probabilistic;
  if (name == "sensing_only") return Scheme::sensing_only;
  throw ConfigError("unknown scheme '" + name + "'");
}

const char* to_string(GridPointStatus status) {
  switch (status) {
    case GridPointStatus::optimal: return "optimal";
    case GridPointStatus::infeasible: return "infeasible";
    case GridPointStatus::sensing_unreachable: return "sensing_unreachable";
    case GridPointStatus::unsupported_m: return "unsupported_m";
  }
  return "unknown";
}

std::vector<double> GridSpec::sensing_times(const SystemParams& params) const {
  if (!(tau_min > 0.0)) throw DomainError("grid: tau_min must be positive");
  std::vector<double> out;
  const double last = params.slot - tau_min;
  for (int k = 1;; ++k) {
    const double tau = k * tau_min;
    if (tau > last * (1.0 + 1e-12)) break;
    time_bandwidth_product(params, tau);
    out.push_back(tau);
  }
  return out;
}

std::vector<double> GridSpec::thresholds_for(int time_bandwidth) const {
  if (const auto* e = std::get_if<ExplicitThresholds>(&thresholds)) {
    for (double v : e->values) {
      if (!(v > 0.0)) throw DomainError("threshold grid: thresholds must be positive");
    }
    return e->values;
  }
  if (const auto* l = std::get_if<LogSpacedThresholds>(&thresholds)) return log_space(l->low, l->high, l->count);
  const auto& f = std::get<FalseAlarmSpan>(thresholds);
  return log_space(threshold_for_false_alarm(time_bandwidth, f.pf_high),
                   threshold_for_false_alarm(time_bandwidth, f.pf_low), f.count);
}

GridSpec default_grid(const SystemParams& params) {
  GridSpec g;
  g.tau_min = 1.0 / params.bandwidth;
  return g;
}

double threshold_for_false_alarm(int time_bandwidth, double pf) {
  if (!(pf > 0.0 && pf < 1.0)) throw DomainError("threshold_for_false_alarm: pf must lie in (0,1)");
  double lo = 0.0;
  double hi = 1.0;
  while (numerics::regularized_upper_gamma_int(time_bandwidth, hi) > pf) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (numerics::regularized_upper_gamma_int(time_bandwidth, mid) > pf) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + hi;  // lambda = 2x
}

numerics::LinearProgram build_policy_lp(const OperatingPoint& point, Scheme scheme) {
  const ChainModel& model = point.chain;
  const ActionLayout& lay = model.layout;
  const VariableLayout v = variable_layout(lay, scheme);
  const int n = lay.num_states();
  const RateCoefficients rc =
      rate_coefficients(point.outage, point.detection, point.false_alarm, point.params.pu_activity);

  std::vector<Eigen::VectorXd> idle_rows(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idle_rows[i] = action_row(model, i, Action::idle);

  numerics::LinearProgram lp(v.num_vars);

  // Balance rows j = 0..N-1; the row for j = N is implied by the others
  // together with the normalization.
  Eigen::MatrixXd balance = Eigen::MatrixXd::Zero(n, v.num_vars);
  for (int i = 0; i < n; ++i) balance.col(i) = idle_rows[i];
  balance.leftCols(n) -= Eigen::MatrixXd::Identity(n, n);
  if (scheme == Scheme::probabilistic) {
    for (int k = 0; k < lay.alpha_size(); ++k) {
      const int i = lay.alpha_begin() + k;
      balance.col(v.alpha_offset + k) = action_row(model, i, Action::blind) - idle_rows[i];
    }
    for (int k = 0; k < lay.beta_size(); ++k) {
      const int i = lay.beta_begin() + k;
      balance.col(v.beta1_offset + k) = action_row(model, i, Action::blind) - idle_rows[i];
    }
  }
  for (int k = 0; k < lay.beta_size(); ++k) {
    const int i = lay.beta_begin() + k;
    balance.col(v.beta2_offset + k) = action_row(model, i, Action::sense) - idle_rows[i];
  }

  const int num_eq = n;  // n-1 balance rows + normalization
  lp.eq_matrix = Eigen::MatrixXd::Zero(num_eq, v.num_vars);
  lp.eq_rhs = Eigen::VectorXd::Zero(num_eq);
  lp.eq_matrix.topRows(n - 1) = balance.topRows(n - 1);
  lp.eq_matrix.row(n - 1).head(n).setOnes();
  lp.eq_rhs[n - 1] = 1.0;

  // pi*alpha <= pi, pi*beta1 + pi*beta2 <= pi, and the PU QoS floor.
  const int num_le = (scheme == Scheme::probabilistic ? lay.alpha_size() : 0) + lay.beta_size() + 1;
  lp.ineq_matrix = Eigen::MatrixXd::Zero(num_le, v.num_vars);
  lp.ineq_rhs = Eigen::VectorXd::Zero(num_le);
  int r = 0;
  if (scheme == Scheme::probabilistic) {
    for (int k = 0; k < lay.alpha_size(); ++k, ++r) {
      lp.ineq_matrix(r, v.alpha_offset + k) = 1.0;
      lp.ineq_matrix(r, lay.alpha_begin() + k) = -1.0;
    }
  }
  for (int k = 0; k < lay.beta_size(); ++k, ++r) {
    if (v.beta1_offset >= 0) lp.ineq_matrix(r, v.beta1_offset + k) = 1.0;
    lp.ineq_matrix(r, v.beta2_offset + k) = 1.0;
    lp.ineq_matrix(r, lay.beta_begin() + k) = -1.0;
  }
  Eigen::RowVectorXd qos = Eigen::RowVectorXd::Zero(v.num_vars);
  qos.head(n).setConstant(rc.pu_idle);
  if (scheme == Scheme::probabilistic) {
    qos.segment(v.alpha_offset, lay.alpha_size()).setConstant(rc.pu_blind - rc.pu_idle);
    qos.segment(v.beta1_offset, lay.beta_size()).setConstant(rc.pu_blind - rc.pu_idle);
  }
  qos.segment(v.beta2_offset, lay.beta_size()).setConstant(rc.pu_sense - rc.pu_idle);
  lp.ineq_matrix.row(r) = -qos;
  lp.ineq_rhs[r] = -point.params.qos_floor;

  if (scheme == Scheme::probabilistic) {
    lp.objective.segment(v.alpha_offset, lay.alpha_size()).setConstant(rc.su_blind);
    lp.objective.segment(v.beta1_offset, lay.beta_size()).setConstant(rc.su_blind);
  }
  lp.objective.segment(v.beta2_offset, lay.beta_size()).setConstant(rc.su_sense);
  return lp;
}

FixedResult solve_fixed(const OperatingPoint& point, Scheme scheme) {
  const ActionLayout& lay = point.chain.layout;
  const VariableLayout v = variable_layout(lay, scheme);
  const int n = lay.num_states();
  const numerics::LinearProgram lp = build_policy_lp(point, scheme);
  const numerics::LpSolution sol = numerics::solve_lp(lp);

  FixedResult out;
  if (sol.status != numerics::LpStatus::optimal) {
    out.status = GridPointStatus::infeasible;
    return out;
  }
  out.status = GridPointStatus::optimal;

  OptimalSolution best;
  best.scheme = scheme;
  SubstitutedVariables& s = best.substituted;
  s.pi = sol.x.head(n);
  s.alpha = scheme == Scheme::probabilistic ? Eigen::VectorXd(sol.x.segment(v.alpha_offset, lay.alpha_size()))
                                            : Eigen::VectorXd::Zero(lay.alpha_size());
  s.beta1 = scheme == Scheme::probabilistic ? Eigen::VectorXd(sol.x.segment(v.beta1_offset, lay.beta_size()))
                                            : Eigen::VectorXd::Zero(lay.beta_size());
  s.beta2 = sol.x.segment(v.beta2_offset, lay.beta_size());

  Policy& p = best.policy;
  p = idle_policy(lay, point.derived.sensing_time, point.sensing.threshold);
  for (int k = 0; k < lay.alpha_size(); ++k) p.alpha[k] = safe_ratio(s.alpha[k], s.pi[lay.alpha_begin() + k]);
  for (int k = 0; k < lay.beta_size(); ++k) {
    const double pi_i = s.pi[lay.beta_begin() + k];
    double b1 = safe_ratio(s.beta1[k], pi_i);
    double b2 = safe_ratio(s.beta2[k], pi_i);
    if (b1 + b2 > 1.0) {
      const double total = b1 + b2;
      b1 /= total;
      b2 /= total;
    }
    p.beta1[k] = b1;
    p.beta2[k] = b2;
  }

  const RateCoefficients rc =
      rate_coefficients(point.outage, point.detection, point.false_alarm, point.params.pu_activity);
  PerformanceReport& rep = best.report;
  rep.pi.pi = s.pi;
  rep.mu_s = sol.objective_value;
  rep.mu_p = rc.pu_idle * s.pi.sum() + (rc.pu_blind - rc.pu_idle) * (s.alpha.sum() + s.beta1.sum()) +
             (rc.pu_sense - rc.pu_idle) * s.beta2.sum();
  rep.p_sense = s.beta2.sum();
  rep.p_access = s.alpha.sum() + s.beta1.sum();
  rep.mean_sensing_time = rep.p_sense * point.derived.sensing_time;
  rep.feasible = rep.mu_p >= point.params.qos_floor - kFeasibilityTol;

  out.solution = std::move(best);
  return out;
}

FixedResult solve_fixed(const SystemParams& params, double tau, double threshold, Scheme scheme) {
  return solve_fixed(make_operating_point(params, tau, threshold), scheme);
}

OptimizeResult optimize(const SystemParams& params, const GridSpec& grid, Scheme scheme, unsigned threads) {
  const std::vector<double> taus = grid.sensing_times(params);
  if (taus.empty()) throw DomainError("optimize: empty sensing-time grid");

  struct Task {
    double tau;
    double threshold;
    GridPointStatus pre_status;
  };
  std::vector<Task> tasks;
  const int nt = transmit_packets(params);
  for (double tau : taus) {
    const int m = time_bandwidth_product(params, tau);
    const long samples = std::lround(params.sampling_rate * tau);
    const int ns = packets_for(static_cast<double>(samples) * params.sample_energy, params.packet_energy);
    if (nt + ns > params.battery_capacity) {
      tasks.push_back({tau, std::numeric_limits<double>::quiet_NaN(), GridPointStatus::sensing_unreachable});
      continue;
    }
    if (m < 2) {
      tasks.push_back({tau, std::numeric_limits<double>::quiet_NaN(), GridPointStatus::unsupported_m});
      continue;
    }
    for (double lambda : grid.thresholds_for(m)) tasks.push_back({tau, lambda, GridPointStatus::optimal});
  }
  if (tasks.empty()) throw DomainError("optimize: empty grid");

  std::vector<FixedResult> results(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t k) {
    const Task& t = tasks[k];
    if (t.pre_status != GridPointStatus::optimal) {
      results[k].status = t.pre_status;
      return;
    }
    results[k] = solve_fixed(params, t.tau, t.threshold, scheme);
  });

  OptimizeResult out;
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    GridPointRecord rec{tasks[k].tau, tasks[k].threshold, results[k].status, 0.0};
    if (results[k].solution) {
      rec.mu_s = results[k].solution->report.mu_s;
      if (!best) {
        best = k;
      } else {
        const double cur = results[*best].solution->report.mu_s;
        const auto key = std::make_tuple(-rec.mu_s, tasks[k].tau, tasks[k].threshold);
        const auto best_key = std::make_tuple(-cur, tasks[*best].tau, tasks[*best].threshold);
        if (key < best_key) best = k;
      }
    }
    out.points.push_back(rec);
  }
  if (best) out.best = std::move(results[*best].solution);
  return out;
}

}  // namespace ehcr
