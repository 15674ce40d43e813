#include "ehcr/system_model.hpp"

#include <cmath>
#include <sstream>

#include "ehcr/error.hpp"

namespace ehcr {

namespace {

constexpr double kIntegralTol = 1e-9;

bool near_integer(double v, long* rounded) {
  const double r = std::round(v);
  *rounded = static_cast<long>(r);
  return std::abs(v - r) <= kIntegralTol * std::max(1.0, std::abs(v));
}

}  // namespace

double LinkParams::mean_gain() const { return fading_mean / std::pow(distance, path_loss_exponent); }

int packets_for(double energy, double packet_energy) {
  const double q = energy / packet_energy;
  return static_cast<int>(std::ceil(q - kIntegralTol * std::max(1.0, std::abs(q))));
}

int transmit_packets(const SystemParams& params) {
  return packets_for(params.transmit_energy, params.packet_energy);
}

int time_bandwidth_product(const SystemParams& params, double tau) {
  long m = 0;
  if (!near_integer(tau * params.bandwidth, &m)) {
    std::ostringstream msg;
    msg << "time-bandwidth product tau*W = " << tau * params.bandwidth << " is not an integer";
    throw DomainError(msg.str());
  }
  return static_cast<int>(m);
}

DerivedQuantities derive(const SystemParams& params, double tau) {
  if (!(tau > 0.0) || !(tau < params.slot)) {
    throw DomainError("derive: sensing time must lie in (0, T)");
  }
  DerivedQuantities d;
  d.sensing_time = tau;
  d.time_bandwidth = time_bandwidth_product(params, tau);
  long samples = 0;
  near_integer(params.sampling_rate * tau, &samples);
  d.sample_count = samples;
  d.sensing_energy = static_cast<double>(samples) * params.sample_energy;
  d.transmit_packets = transmit_packets(params);
  d.sensing_packets = packets_for(d.sensing_energy, params.packet_energy);
  d.pu_rate = params.pu_packet_bits / (params.slot * params.bandwidth);
  d.su_rate_blind = params.su_packet_bits / (params.slot * params.bandwidth);
  d.su_rate_sensing = params.su_packet_bits / ((params.slot - tau) * params.bandwidth);
  d.avg_sensing_snr = params.pu_power * params.links.pst.mean_gain() / params.noise_power;
  if (d.transmit_packets + d.sensing_packets > params.battery_capacity) {
    std::ostringstream msg;
    msg << "sensing branch unreachable: N_t + N_s = " << d.transmit_packets + d.sensing_packets
        << " exceeds battery capacity " << params.battery_capacity;
    throw ConfigError(msg.str());
  }
  return d;
}

std::vector<std::string> validate(const SystemParams& params) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0)) out.push_back(std::string(name) + " must be positive");
  };
  auto unit = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) out.push_back(std::string(name) + " out of [0,1]");
  };
  positive(params.pu_power, "P_p");
  positive(params.noise_power, "sigma_n2");
  positive(params.slot, "T");
  positive(params.bandwidth, "W");
  positive(params.pu_packet_bits, "b_p");
  positive(params.su_packet_bits, "b_s");
  unit(params.pu_activity, "rho");
  unit(params.rf_efficiency, "eta");
  positive(params.packet_energy, "E_u");
  positive(params.transmit_energy, "E_t");
  positive(params.sample_energy, "e_proc");
  positive(params.sampling_rate, "f_s");
  if (!(params.nature_rate >= 0.0)) out.push_back("lambda_e must be nonnegative");
  unit(params.qos_floor, "mu_th");
  if (params.battery_capacity < 1) out.push_back("N_max must be at least 1");

  const std::pair<const LinkParams*, const char*> links[] = {
      {&params.links.p, "p"}, {&params.links.pst, "pst"}, {&params.links.ps, "ps"},
      {&params.links.s, "s"}, {&params.links.sp, "sp"}};
  for (const auto& [link, name] : links) {
    if (!(link->fading_mean > 0.0)) out.push_back(std::string("links.") + name + ".fading_mean must be positive");
    if (!(link->distance > 0.0)) out.push_back(std::string("links.") + name + ".distance must be positive");
  }

  if (params.packet_energy > 0.0 && params.transmit_energy > 0.0 &&
      params.battery_capacity < transmit_packets(params)) {
    out.push_back("battery smaller than one transmission (N_max < N_t)");
  }
  return out;
}

SystemParams reference_table_params() {
  SystemParams p;
  p.pu_power = 4.0;
  p.noise_power = 0.02;
  p.slot = 1e-3;
  p.bandwidth = 20e3;
  p.pu_packet_bits = 32.0;
  p.su_packet_bits = 16.0;
  p.pu_activity = 0.5;
  p.rf_efficiency = 0.5;
  p.packet_energy = 0.06;
  p.transmit_energy = 0.5;
  p.sample_energy = 1e-2;
  p.sampling_rate = 20e3;
  p.nature_rate = 2.0;
  p.battery_capacity = 20;
  p.qos_floor = 0.65;
  p.links.p = {0.8, 5.0};
  p.links.pst = {0.8, 3.0};
  p.links.ps = {0.8, 5.0};
  p.links.s = {0.8, 3.0};
  p.links.sp = {0.8, 5.0};
  return p;
}

SystemParams testbench_params() {
  SystemParams p = reference_table_params();
  p.packet_energy = 4e-5;
  p.transmit_energy = 3.5e-4;
  p.sample_energy = 4e-6;
  p.nature_rate = 1000.0;
  return p;
}

}  // namespace ehcr
