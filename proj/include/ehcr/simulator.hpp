#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehcr/chain.hpp"
#include "ehcr/system_model.hpp"

namespace ehcr {

/// faithful: one h_pst per slot drives both the sensing SNR and the RF
/// harvest. decorrelated: sensing outcome and RF harvest are drawn
/// independently, matching the analytical model's assumption.
enum class CorrelationMode { faithful, decorrelated };

const char* to_string(CorrelationMode mode);
CorrelationMode parse_correlation_mode(const std::string& name);

struct SimConfig {
  long slots = 100000;
  std::uint64_t seed = 1;
  int initial_battery = 0;
  CorrelationMode mode = CorrelationMode::decorrelated;
  int batches = 100;  // batch-means groups for standard errors
};

/// Point estimate with a batch-means standard error (infinite when fewer
/// than two batches are available).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct ActionCounts {
  long idle = 0;
  long blind = 0;
  long sense = 0;
  long su_transmissions = 0;
};

struct SimReport {
  Estimate mu_p;  // PU success rate over PU-active slots
  Estimate mu_s;  // SU successes per slot
  Estimate p_sense;
  Estimate p_access;
  std::vector<Estimate> occupancy;  // battery level at slot start
  std::vector<long> histogram;
  ActionCounts actions;
  long slots = 0;
  long pu_active_slots = 0;
  int min_battery_seen = 0;
  int max_battery_seen = 0;
};

/// Slot-level Monte Carlo of the system under a fixed policy. Deterministic
/// for a fixed seed.
SimReport simulate(const SystemParams& params, const Policy& policy, const SimConfig& sim);

struct ComparisonRow {
  std::string quantity;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct CompareOptions {
  long min_slots = 1000;          // below this no rows are flagged
  double detection_bias = 0.0;    // added to the analytic P_D (fault injection)
  double z_limit = 3.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool insufficient_data = false;
  SimReport sim;

  bool any_flag() const;
};

/// Analytic (mu_p, mu_s, p_S, p_A, pi) against a simulation of the same
/// policy, with z-scores.
ComparisonReport compare(const SystemParams& params, const Policy& policy, const SimConfig& sim,
                         const CompareOptions& options = {});

}  // namespace ehcr
