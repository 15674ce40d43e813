#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ehcr/harvesting.hpp"
#include "ehcr/system_model.hpp"

namespace ehcr {

/// Battery-level ranges of the three action regimes:
///   [0, N_t)             idle only
///   [N_t, N_t+N_s)       blind access (alpha) or idle
///   [N_t+N_s, N_max]     blind access (beta1), sense (beta2) or idle
struct ActionLayout {
  int transmit_packets = 0;
  int sensing_packets = 0;
  int capacity = 0;

  int alpha_begin() const { return transmit_packets; }
  int alpha_size() const { return sensing_packets; }
  int beta_begin() const { return transmit_packets + sensing_packets; }
  int beta_size() const { return capacity - beta_begin() + 1; }
  int num_states() const { return capacity + 1; }
};

ActionLayout make_layout(const DerivedQuantities& derived, int capacity);

/// Access/sensing probabilities per battery level, plus the sensing time and
/// detection threshold they were designed for.
struct Policy {
  std::vector<double> alpha;
  std::vector<double> beta1;
  std::vector<double> beta2;
  double sensing_time = 0.0;
  double threshold = 0.0;
};

/// Throws ConfigError on length mismatch and DomainError on entries outside
/// [0,1] or beta1 + beta2 > 1 (tolerance 1e-12).
void check_policy(const Policy& policy, const ActionLayout& layout);

Policy idle_policy(const ActionLayout& layout, double tau, double threshold);

enum class Action { idle, blind, sense };

struct ActionMix {
  double idle = 1.0;
  double blind = 0.0;
  double sense = 0.0;
};

ActionMix action_mix(const Policy& policy, const ActionLayout& layout, int level);

/// Everything the energy-queue kernel depends on besides the policy.
struct ChainModel {
  ActionLayout layout;
  double pu_activity = 0.0;
  HarvestPmf idle_harvest;    // arrivals in a PU-idle slot
  HarvestPmf active_harvest;  // arrivals in a PU-active slot
  double detection = 0.0;     // P_D
  double false_alarm = 0.0;   // P_F
};

ChainModel make_chain_model(const SystemParams& params, const DerivedQuantities& derived, double detection,
                            double false_alarm);

/// Distribution of the next battery level from `level` under a pure action.
/// Consumption happens first, arrivals are added, the result is capped at
/// N_max (the last column collects the arrival tail).
Eigen::VectorXd action_row(const ChainModel& model, int level, Action action);

struct TransitionMatrix {
  Eigen::MatrixXd p;

  int num_states() const { return static_cast<int>(p.rows()); }
  /// max_i |Σ_j P_ij - 1|
  double row_sum_error() const;
};

TransitionMatrix build_transition_matrix(const ChainModel& model, const Policy& policy);

struct StationaryDistribution {
  Eigen::VectorXd pi;
};

/// Closed communicating classes of the chain, each sorted ascending.
std::vector<std::vector<int>> closed_classes(const TransitionMatrix& matrix);

/// Solves pi P = pi, Σ pi = 1 with the normalization replacing the last
/// balance row. Throws AmbiguityError when more than one closed class exists.
StationaryDistribution stationary_distribution(const TransitionMatrix& matrix);

/// ‖pi P - pi‖_∞
double stationary_residual(const StationaryDistribution& dist, const TransitionMatrix& matrix);

struct AccessStats {
  double p_sense = 0.0;
  double p_access = 0.0;
  double mean_sensing_time = 0.0;
};

AccessStats access_stats(const StationaryDistribution& dist, const Policy& policy, const ActionLayout& layout);

}  // namespace ehcr
