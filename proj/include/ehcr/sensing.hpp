#pragma once

#include "ehcr/system_model.hpp"

namespace ehcr {

/// Energy-detector configuration: sensing time, threshold and the integer
/// time-bandwidth product m = tau * W.
struct SensingConfig {
  double sensing_time = 0.0;
  double threshold = 0.0;
  int time_bandwidth = 1;
};

/// Builds the config, taking W from params. Throws DomainError when tau*W is
/// not a positive integer or the threshold is negative.
SensingConfig make_sensing_config(const SystemParams& params, double tau, double threshold);

/// Γ(m, λ/2)/Γ(m).
double false_alarm(const SensingConfig& cfg);

/// Q_m(sqrt(2γ), sqrt(λ)) for one SNR realization γ.
double detection_instant(const SensingConfig& cfg, double snr);

/// Detection probability averaged over Rayleigh fading with mean SNR
/// avg_snr. Throws ConfigError for m = 1, where the closed form has no
/// finite sums.
double detection_avg(const SensingConfig& cfg, double avg_snr);

}  // namespace ehcr
