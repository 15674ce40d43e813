#include "ehcr/performance.hpp"

namespace ehcr {

OperatingPoint make_operating_point(const SystemParams& params, double tau, double threshold) {
  OperatingPoint op;
  op.params = params;
  op.derived = derive(params, tau);
  op.sensing = make_sensing_config(params, tau, threshold);
  op.false_alarm = false_alarm(op.sensing);
  op.detection = detection_avg(op.sensing, op.derived.avg_sensing_snr);
  op.outage = outage_bundle(params, tau);
  op.chain = make_chain_model(params, op.derived, op.detection, op.false_alarm);
  return op;
}

RateCoefficients rate_coefficients(const OutageBundle& o, double detection, double false_alarm,
                                   double pu_activity) {
  const double miss = 1.0 - detection;
  const double rho = pu_activity;
  RateCoefficients c;
  c.pu_idle = o.pu_no_outage_silent;
  c.pu_blind = o.pu_no_outage_ws;
  c.pu_sense = detection * o.pu_no_outage_silent + miss * o.pu_no_outage_md;
  c.su_blind = rho * o.su_no_outage_wsp + (1.0 - rho) * o.su_no_outage_ws;
  c.su_sense = rho * miss * o.su_no_outage_sp + (1.0 - rho) * (1.0 - false_alarm) * o.su_no_outage_s;
  return c;
}

double primary_success_rate(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout,
                            const OutageBundle& outage, double detection) {
  check_policy(policy, layout);
  const RateCoefficients c = rate_coefficients(outage, detection, 0.0, 0.0);
  double mu = 0.0;
  for (int i = 0; i < layout.num_states(); ++i) {
    const ActionMix mix = action_mix(policy, layout, i);
    mu += dist.pi[i] * (mix.idle * c.pu_idle + mix.blind * c.pu_blind + mix.sense * c.pu_sense);
  }
  return mu;
}

double secondary_success_rate(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout,
                              const OutageBundle& outage, double detection, double false_alarm, double pu_activity) {
  check_policy(policy, layout);
  const RateCoefficients c = rate_coefficients(outage, detection, false_alarm, pu_activity);
  double mu = 0.0;
  for (int i = layout.alpha_begin(); i < layout.num_states(); ++i) {
    const ActionMix mix = action_mix(policy, layout, i);
    mu += dist.pi[i] * (mix.blind * c.su_blind + mix.sense * c.su_sense);
  }
  return mu;
}

PerformanceReport evaluate(const OperatingPoint& point, const Policy& policy) {
  const ActionLayout& layout = point.chain.layout;
  const TransitionMatrix tm = build_transition_matrix(point.chain, policy);
  PerformanceReport r;
  r.pi = stationary_distribution(tm);
  r.mu_p = primary_success_rate(r.pi, policy, layout, point.outage, point.detection);
  r.mu_s = secondary_success_rate(r.pi, policy, layout, point.outage, point.detection, point.false_alarm,
                                  point.params.pu_activity);
  const AccessStats s = access_stats(r.pi, policy, layout);
  r.p_sense = s.p_sense;
  r.p_access = s.p_access;
  r.mean_sensing_time = s.mean_sensing_time;
  r.feasible = r.mu_p >= point.params.qos_floor - kFeasibilityTol;
  return r;
}

PerformanceReport evaluate(const SystemParams& params, const Policy& policy) {
  return evaluate(make_operating_point(params, policy.sensing_time, policy.threshold), policy);
}

}  // namespace ehcr
