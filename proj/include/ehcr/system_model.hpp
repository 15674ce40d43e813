#pragma once

#include <string>
#include <vector>

namespace ehcr {

/// One Rayleigh link. The channel power gain |h|² is exponential with mean
/// fading_mean / distance^path_loss_exponent.
struct LinkParams {
  double fading_mean = 1.0;
  double distance = 1.0;
  double path_loss_exponent = 2.0;

  double mean_gain() const;
  bool operator==(const LinkParams&) const = default;
};

/// The five links of the PU/SU topology.
struct Links {
  LinkParams p;    // PT -> PD
  LinkParams pst;  // PT -> ST (sensing and RF harvesting)
  LinkParams ps;   // PT -> SD (interference at the SU receiver)
  LinkParams s;    // ST -> SD
  LinkParams sp;   // ST -> PD (interference at the PU receiver)

  bool operator==(const Links&) const = default;
};

/// Physical and system constants. Units: Watts, Joules, seconds, Hz, bits.
struct SystemParams {
  double pu_power = 4.0;               // P_p
  double noise_power = 0.02;           // sigma_n^2
  double slot = 1e-3;                  // T
  double bandwidth = 20e3;             // W
  double pu_packet_bits = 32.0;        // b_p
  double su_packet_bits = 16.0;        // b_s
  double pu_activity = 0.5;            // rho
  double rf_efficiency = 0.5;          // eta
  double packet_energy = 0.06;         // E_u
  double transmit_energy = 0.5;        // E_t
  double sample_energy = 1e-2;         // e_proc
  double sampling_rate = 20e3;         // f_s
  double nature_rate = 2.0;            // lambda_e, packets per second
  int battery_capacity = 20;           // N_max
  double qos_floor = 0.65;             // mu_th
  Links links;

  bool operator==(const SystemParams&) const = default;
};

/// Integer energy-packet counts and spectral efficiencies at a sensing time.
struct DerivedQuantities {
  double sensing_time = 0.0;     // tau
  int transmit_packets = 0;      // N_t
  int sensing_packets = 0;       // N_s(tau)
  int time_bandwidth = 0;        // m = tau * W
  long sample_count = 0;         // n_s = f_s * tau
  double sensing_energy = 0.0;   // E_s
  double pu_rate = 0.0;          // R_p
  double su_rate_blind = 0.0;    // R_s^ws
  double su_rate_sensing = 0.0;  // R_s^s(tau)
  double avg_sensing_snr = 0.0;  // gamma-bar
};

/// ceil(energy / packet_energy), robust to representation error in the
/// quotient (0.001 / 0.0001 is 10, not 11).
int packets_for(double energy, double packet_energy);

/// Energy packets consumed by one transmission.
int transmit_packets(const SystemParams& params);

/// Time-bandwidth product tau*W; throws DomainError when it is not integral.
int time_bandwidth_product(const SystemParams& params, double tau);

/// Derived quantities at sensing time tau.
/// Throws DomainError for tau outside (0, T) or non-integral tau*W, and
/// ConfigError when N_t + N_s exceeds the battery capacity.
DerivedQuantities derive(const SystemParams& params, double tau);

/// Every violated invariant of params, as human-readable messages. Empty
/// iff the parameter set is admissible. A zero nature rate or RF efficiency
/// is admissible and switches that harvesting source off.
std::vector<std::string> validate(const SystemParams& params);

/// Table I parameter set.
SystemParams reference_table_params();

/// Table I rescaled so that per-slot harvesting and SU interference are
/// material (see README).
SystemParams testbench_params();

}  // namespace ehcr
