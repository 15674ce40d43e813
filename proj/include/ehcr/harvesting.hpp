#pragma once

#include <vector>

#include "ehcr/system_model.hpp"

namespace ehcr {

/// Which energy-arrival distribution a query refers to.
enum class HarvestKind { nature, rf, combined };

/// Poisson(lambda_e * T) mass at n; 0 for n < 0.
double nature_pmf(double nature_rate, double slot, int n);

/// Mass at r of floor(eta P_p |h_pst|^2 T / E_u) with exponential |h_pst|^2.
/// Degenerate at 0 when eta, P_p or the link gain vanish.
double rf_pmf(const SystemParams& params, int r);

/// Nature mass when include_rf is false, otherwise the convolution of the
/// nature and RF masses.
double combined_pmf(const SystemParams& params, bool include_rf, int q);

/// Pr(X >= n) for the selected distribution; 1 for n <= 0.
double tail_at_least(HarvestKind kind, const SystemParams& params, int n);

/// Truncated energy-arrival distribution on 0..K. The last entry holds the
/// folded tail Pr(X >= K), so the masses sum to one.
class HarvestPmf {
 public:
  HarvestPmf() : mass_{1.0} {}
  /// Takes the masses verbatim; throws DomainError on negative entries or a
  /// total differing from one by more than 1e-12.
  explicit HarvestPmf(std::vector<double> mass);

  /// Tabulates kind for params. K is the smallest count whose tail mass is
  /// below 1e-12, capped at 4 * N_max.
  static HarvestPmf tabulate(HarvestKind kind, const SystemParams& params);

  double pmf(int n) const;
  double tail_at_least(int n) const;
  double mean() const;
  int truncation() const { return static_cast<int>(mass_.size()) - 1; }
  const std::vector<double>& masses() const { return mass_; }

 private:
  std::vector<double> mass_;
};

/// Discrete convolution of two folded pmfs, refolded at the larger of the
/// two truncation points.
HarvestPmf convolve(const HarvestPmf& a, const HarvestPmf& b);

inline constexpr double kHarvestTailMass = 1e-12;

}  // namespace ehcr
