#include "ehcr/harvesting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ehcr/error.hpp"

namespace ehcr {

namespace {

// E_u / (sigma_pst eta P_p T): the RF mass is geometric with ratio e^{-scale}.
double rf_scale(const SystemParams& params) {
  const double harvestable = params.links.pst.mean_gain() * params.rf_efficiency * params.pu_power * params.slot;
  if (!(harvestable > 0.0)) return std::numeric_limits<double>::infinity();
  return params.packet_energy / harvestable;
}

double pmf_of(HarvestKind kind, const SystemParams& params, int n) {
  switch (kind) {
    case HarvestKind::nature: return nature_pmf(params.nature_rate, params.slot, n);
    case HarvestKind::rf: return rf_pmf(params, n);
    case HarvestKind::combined: return combined_pmf(params, true, n);
  }
  return 0.0;
}

}  // namespace

double nature_pmf(double nature_rate, double slot, int n) {
  if (!(nature_rate >= 0.0) || !(slot > 0.0)) throw DomainError("nature_pmf: need lambda_e >= 0 and T > 0");
  if (n < 0) return 0.0;
  const double mean = nature_rate * slot;
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

double rf_pmf(const SystemParams& params, int r) {
  if (r < 0) return 0.0;
  const double scale = rf_scale(params);
  if (std::isinf(scale)) return r == 0 ? 1.0 : 0.0;
  // e^{-r s} - e^{-(r+1) s} = e^{-r s} (1 - e^{-s})
  return std::exp(-r * scale) * -std::expm1(-scale);
}

double combined_pmf(const SystemParams& params, bool include_rf, int q) {
  if (q < 0) return 0.0;
  if (!include_rf) return nature_pmf(params.nature_rate, params.slot, q);
  double sum = 0.0;
  for (int n = 0; n <= q; ++n) sum += nature_pmf(params.nature_rate, params.slot, n) * rf_pmf(params, q - n);
  return sum;
}

double tail_at_least(HarvestKind kind, const SystemParams& params, int n) {
  if (n <= 0) return 1.0;
  double below = 0.0;
  for (int k = 0; k < n; ++k) below += pmf_of(kind, params, k);
  return std::max(0.0, 1.0 - below);
}

HarvestPmf::HarvestPmf(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw DomainError("HarvestPmf: empty support");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw DomainError("HarvestPmf: negative mass");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("HarvestPmf: masses do not sum to one");
}

HarvestPmf HarvestPmf::tabulate(HarvestKind kind, const SystemParams& params) {
  const int cap = 4 * std::max(params.battery_capacity, 1);
  std::vector<double> mass;
  double below = 0.0;
  for (int k = 0;; ++k) {
    const double tail = std::max(0.0, 1.0 - below);
    if (tail < kHarvestTailMass || k == cap) {
      mass.push_back(tail);
      break;
    }
    const double p = pmf_of(kind, params, k);
    mass.push_back(p);
    below += p;
  }
  // Renormalize the folded bin exactly against the accumulated masses.
  mass.back() = std::max(0.0, 1.0 - std::accumulate(mass.begin(), mass.end() - 1, 0.0));
  return HarvestPmf(std::move(mass));
}

double HarvestPmf::pmf(int n) const {
  if (n < 0 || n >= static_cast<int>(mass_.size())) return 0.0;
  return mass_[static_cast<size_t>(n)];
}

double HarvestPmf::tail_at_least(int n) const {
  if (n <= 0) return 1.0;
  double tail = 0.0;
  for (size_t k = static_cast<size_t>(n); k < mass_.size(); ++k) tail += mass_[k];
  return tail;
}

double HarvestPmf::mean() const {
  double m = 0.0;
  for (size_t k = 0; k < mass_.size(); ++k) m += static_cast<double>(k) * mass_[k];
  return m;
}

HarvestPmf convolve(const HarvestPmf& a, const HarvestPmf& b) {
  const int k = std::max(a.truncation(), b.truncation());
  std::vector<double> out(static_cast<size_t>(k) + 1, 0.0);
  const auto& ma = a.masses();
  const auto& mb = b.masses();
  for (size_t i = 0; i < ma.size(); ++i) {
    for (size_t j = 0; j < mb.size(); ++j) {
      out[std::min(i + j, static_cast<size_t>(k))] += ma[i] * mb[j];
    }
  }
  return HarvestPmf(std::move(out));
}

}  // namespace ehcr
