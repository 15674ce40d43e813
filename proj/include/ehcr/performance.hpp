#pragma once

#include "ehcr/chain.hpp"
#include "ehcr/outage.hpp"
#include "ehcr/sensing.hpp"
#include "ehcr/system_model.hpp"

namespace ehcr {

/// The analytical model frozen at one (tau, lambda) pair.
struct OperatingPoint {
  SystemParams params;
  DerivedQuantities derived;
  SensingConfig sensing;
  double detection = 0.0;    // P_D, channel averaged
  double false_alarm = 0.0;  // P_F
  OutageBundle outage;
  ChainModel chain;
};

OperatingPoint make_operating_point(const SystemParams& params, double tau, double threshold);

/// Per-action success probabilities. PU entries are conditional on the PU
/// transmitting; SU entries are unconditional per slot.
struct RateCoefficients {
  double pu_idle = 0.0;
  double pu_blind = 0.0;
  double pu_sense = 0.0;
  double su_blind = 0.0;
  double su_sense = 0.0;
};

RateCoefficients rate_coefficients(const OutageBundle& outage, double detection, double false_alarm,
                                   double pu_activity);

/// PU success rate mu_p.
double primary_success_rate(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout,
                            const OutageBundle& outage, double detection);

/// SU success rate mu_s.
double secondary_success_rate(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout,
                              const OutageBundle& outage, double detection, double false_alarm, double pu_activity);

struct PerformanceReport {
  double mu_p = 0.0;
  double mu_s = 0.0;
  double p_sense = 0.0;
  double p_access = 0.0;
  double mean_sensing_time = 0.0;
  StationaryDistribution pi;
  bool feasible = false;  // mu_p >= mu_th - 1e-9
};

inline constexpr double kFeasibilityTol = 1e-9;

PerformanceReport evaluate(const OperatingPoint& point, const Policy& policy);

/// Builds the operating point at the policy's own (tau, lambda).
PerformanceReport evaluate(const SystemParams& params, const Policy& policy);

}  // namespace ehcr
