#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ehcr/lp.hpp"
#include "ehcr/performance.hpp"

namespace ehcr {

enum class Scheme { probabilistic, sensing_only };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct ExplicitThresholds {
  std::vector<double> values;
};

struct LogSpacedThresholds {
  double low = 1.0;
  double high = 100.0;
  int count = 40;
};

/// Log-spaced thresholds whose false-alarm probability at the current m
/// runs from pf_high down to pf_low.
struct FalseAlarmSpan {
  double pf_high = 0.999;
  double pf_low = 0.001;
  int count = 40;
};

using ThresholdGrid = std::variant<ExplicitThresholds, LogSpacedThresholds, FalseAlarmSpan>;

/// Sensing times {tau_min, 2 tau_min, ..., T - tau_min} times a threshold grid.
struct GridSpec {
  double tau_min = 0.0;
  ThresholdGrid thresholds = FalseAlarmSpan{};

  /// Throws DomainError if tau_min is not positive or any tau*W is not integral.
  std::vector<double> sensing_times(const SystemParams& params) const;
  std::vector<double> thresholds_for(int time_bandwidth) const;
};

/// tau_min = 1/W with the false-alarm-span threshold grid.
GridSpec default_grid(const SystemParams& params);

/// Threshold lambda with Γ(m, λ/2)/Γ(m) = pf, by bisection.
double threshold_for_false_alarm(int time_bandwidth, double pf);

/// pi and the products pi*alpha, pi*beta1, pi*beta2 solved for by the LP.
struct SubstitutedVariables {
  Eigen::VectorXd pi;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta1;
  Eigen::VectorXd beta2;
};

struct OptimalSolution {
  Policy policy;
  PerformanceReport report;  // values read off the LP solution
  SubstitutedVariables substituted;
  Scheme scheme = Scheme::probabilistic;
};

enum class GridPointStatus { optimal, infeasible, sensing_unreachable, unsupported_m };

const char* to_string(GridPointStatus status);

struct FixedResult {
  GridPointStatus status = GridPointStatus::infeasible;
  std::optional<OptimalSolution> solution;
};

/// The linear program in (pi, pi*alpha, pi*beta1, pi*beta2) at one operating
/// point. Variables are ordered pi[0..N], then alpha, beta1, beta2 products
/// (alpha and beta1 are absent under the sensing-only scheme).
numerics::LinearProgram build_policy_lp(const OperatingPoint& point, Scheme scheme);

FixedResult solve_fixed(const OperatingPoint& point, Scheme scheme);

/// Throws ConfigError when the sensing branch is unreachable or m = 1.
FixedResult solve_fixed(const SystemParams& params, double tau, double threshold, Scheme scheme);

struct GridPointRecord {
  double sensing_time = 0.0;
  double threshold = 0.0;
  GridPointStatus status = GridPointStatus::infeasible;
  double mu_s = 0.0;
};

struct OptimizeResult {
  std::optional<OptimalSolution> best;  // empty when every grid point is infeasible
  std::vector<GridPointRecord> points;  // in grid order
};

/// Exhaustive search over the grid. The winner has the largest LP value;
/// exact ties go to the smaller tau, then the smaller lambda.
OptimizeResult optimize(const SystemParams& params, const GridSpec& grid, Scheme scheme, unsigned threads = 0);

inline constexpr double kRecoveryFloor = 1e-12;

}  // namespace ehcr
