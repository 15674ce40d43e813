#include "ehcr/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "ehcr/error.hpp"
#include "ehcr/numerics.hpp"

namespace ehcr {

SensingConfig make_sensing_config(const SystemParams& params, double tau, double threshold) {
  if (!(threshold >= 0.0)) throw DomainError("sensing threshold must be nonnegative");
  SensingConfig cfg;
  cfg.sensing_time = tau;
  cfg.threshold = threshold;
  cfg.time_bandwidth = time_bandwidth_product(params, tau);
  if (cfg.time_bandwidth < 1) throw DomainError("time-bandwidth product must be at least 1");
  return cfg;
}

double false_alarm(const SensingConfig& cfg) {
  return numerics::regularized_upper_gamma_int(cfg.time_bandwidth, 0.5 * cfg.threshold);
}

double detection_instant(const SensingConfig& cfg, double snr) {
  if (!(snr >= 0.0)) throw DomainError("detection_instant: SNR must be nonnegative");
  return numerics::marcum_q(cfg.time_bandwidth, std::sqrt(2.0 * snr), std::sqrt(cfg.threshold));
}

double detection_avg(const SensingConfig& cfg, double avg_snr) {
  const int m = cfg.time_bandwidth;
  if (m < 2) throw ConfigError("detection_avg: time-bandwidth product m = 1 is not supported");
  if (!(avg_snr > 0.0)) throw DomainError("detection_avg: average SNR must be positive");
  const double a = 0.5 * cfg.threshold;
  if (a == 0.0) return 1.0;

  // With c = γ̄/(1+γ̄) the bracketed difference of the Rayleigh-averaged
  // closed form equals e^{-a} Σ_{k≥m-1} (ac)^k/k!, so
  //   P_D = Γ(m-1, a)/Γ(m-1) + Σ_{k≥m-1} e^{-a} a^k c^{k-m+1} / k!,
  // which has only positive terms and no cancellation at small γ̄.
  const double head = numerics::regularized_upper_gamma_int(m - 1, a);
  const double c = avg_snr / (1.0 + avg_snr);
  const double log_a = std::log(a);
  const double log_c = std::log(c);
  const double ac = a * c;

  double tail = 0.0;
  for (int k = m - 1; k < m - 1 + 1000000; ++k) {
    const double term = std::exp(-a + k * log_a + (k - m + 1) * log_c - std::lgamma(k + 1.0));
    tail += term;
    const double ratio = ac / (k + 2.0);
    if (ratio < 0.5 && term * ratio / (1.0 - ratio) <= 1e-17 * (head + tail)) break;
    if (term == 0.0 && k > ac) break;
  }
  return std::clamp(head + tail, 0.0, 1.0);
}

}  // namespace ehcr
