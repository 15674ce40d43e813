#pragma once

#include "ehcr/system_model.hpp"

namespace ehcr {

/// Success (no-outage) probabilities for every PU/SU transmission scenario.
///   pu_no_outage_silent  PU alone on the channel
///   pu_no_outage_ws      SU accesses without sensing (power E_t/T)
///   pu_no_outage_md      SU mis-detects after sensing (power E_t/(T-tau))
///   su_no_outage_ws      blind SU access, PU idle
///   su_no_outage_wsp     blind SU access, PU active
///   su_no_outage_s       SU access after sensing, PU idle
///   su_no_outage_sp      SU access after mis-detection, PU active
struct OutageBundle {
  double pu_no_outage_silent = 0.0;
  double pu_no_outage_ws = 0.0;
  double pu_no_outage_md = 0.0;
  double su_no_outage_ws = 0.0;
  double su_no_outage_wsp = 0.0;
  double su_no_outage_s = 0.0;
  double su_no_outage_sp = 0.0;
};

/// Pr{log2(1 + P|h|²/σ_n²) > R} for |h|² exponential with mean `gain`:
/// exp(-(2^R - 1) σ_n² / (P gain)).
double no_outage_direct(double rate, double tx_power, double gain, double noise_power);

/// Same with one Rayleigh interferer of power P_I over mean gain σ_I:
/// no_outage_direct · Pσ / (Pσ + P_I σ_I (2^R - 1)).
double no_outage_interfered(double rate, double tx_power, double gain, double interferer_power,
                            double interferer_gain, double noise_power);

/// All seven probabilities at sensing time tau in (0, T).
OutageBundle outage_bundle(const SystemParams& params, double tau);

}  // namespace ehcr
