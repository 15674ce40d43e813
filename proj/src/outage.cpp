#include "ehcr/outage.hpp"

#include <cmath>

#include "ehcr/error.hpp"

namespace ehcr {

double no_outage_direct(double rate, double tx_power, double gain, double noise_power) {
  if (!(rate >= 0.0) || !(tx_power > 0.0) || !(gain > 0.0) || !(noise_power >= 0.0)) {
    throw DomainError("no_outage_direct: rate/noise must be nonnegative, power/gain positive");
  }
  return std::exp(-std::expm1(rate * std::log(2.0)) * noise_power / (tx_power * gain));
}

double no_outage_interfered(double rate, double tx_power, double gain, double interferer_power,
                            double interferer_gain, double noise_power) {
  if (!(interferer_power >= 0.0) || !(interferer_gain > 0.0)) {
    throw DomainError("no_outage_interfered: interferer power must be nonnegative, gain positive");
  }
  const double direct = no_outage_direct(rate, tx_power, gain, noise_power);
  const double desired = tx_power * gain;
  return direct * desired / (desired + interferer_power * interferer_gain * std::expm1(rate * std::log(2.0)));
}

OutageBundle outage_bundle(const SystemParams& params, double tau) {
  if (!(tau > 0.0) || !(tau < params.slot)) throw DomainError("outage_bundle: sensing time must lie in (0, T)");
  const double w = params.bandwidth;
  const double t = params.slot;
  const double t_tx = t - tau;
  const double r_p = params.pu_packet_bits / (t * w);
  const double r_ws = params.su_packet_bits / (t * w);
  const double r_s = params.su_packet_bits / (t_tx * w);
  const double su_power_blind = params.transmit_energy / t;
  const double su_power_sensing = params.transmit_energy / t_tx;
  const double n0 = params.noise_power;
  const double pp = params.pu_power;
  const double g_p = params.links.p.mean_gain();
  const double g_sp = params.links.sp.mean_gain();
  const double g_s = params.links.s.mean_gain();
  const double g_ps = params.links.ps.mean_gain();

  OutageBundle b;
  b.pu_no_outage_silent = no_outage_direct(r_p, pp, g_p, n0);
  b.pu_no_outage_ws = no_outage_interfered(r_p, pp, g_p, su_power_blind, g_sp, n0);
  b.pu_no_outage_md = no_outage_interfered(r_p, pp, g_p, su_power_sensing, g_sp, n0);
  b.su_no_outage_ws = no_outage_direct(r_ws, su_power_blind, g_s, n0);
  b.su_no_outage_wsp = no_outage_interfered(r_ws, su_power_blind, g_s, pp, g_ps, n0);
  b.su_no_outage_s = no_outage_direct(r_s, su_power_sensing, g_s, n0);
  b.su_no_outage_sp = no_outage_interfered(r_s, su_power_sensing, g_s, pp, g_ps, n0);
  return b;
}

}  // namespace ehcr
