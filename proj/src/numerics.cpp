#include "ehcr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehcr/error.hpp"

namespace ehcr::numerics {

double regularized_upper_gamma_int(int m, double x) {
  if (m < 1) throw DomainError("regularized_upper_gamma_int: order must be >= 1");
  if (!(x >= 0.0)) throw DomainError("regularized_upper_gamma_int: argument must be >= 0");
  if (x == 0.0) return 1.0;

  // Terms are built in log space so that large x does not underflow e^{-x}
  // before the polynomial part has grown.
  const double log_x = std::log(x);
  double log_term = -x;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) log_term += log_x - std::log(static_cast<double>(k));
    sum += std::exp(log_term);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double marcum_q(int m, double a, double b) {
  if (m < 1) throw DomainError("marcum_q: order must be >= 1");
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("marcum_q: arguments must be >= 0");
  if (b == 0.0) return 1.0;

  const double x = 0.5 * b * b;
  const double nu = 0.5 * a * a;
  double gamma_tail = regularized_upper_gamma_int(m, x);
  if (nu == 0.0) return gamma_tail;

  const double log_x = std::log(x);
  const double log_nu = std::log(nu);
  double log_weight = -nu;
  double sum = 0.0;
  for (int j = 0; j < kMarcumTermCap; ++j) {
    if (j > 0) {
      log_weight += log_nu - std::log(static_cast<double>(j));
      // Γ(n+1, x)/Γ(n+1) = Γ(n, x)/Γ(n) + e^{-x} x^n / n!
      const int n = m + j - 1;
      gamma_tail += std::exp(-x + n * log_x - std::lgamma(n + 1.0));
      gamma_tail = std::min(gamma_tail, 1.0);
    }
    sum += std::exp(log_weight) * gamma_tail;

    // Remaining Poisson mass past j is bounded by a geometric series once the
    // weights are decreasing.
    const double ratio = nu / (j + 2.0);
    if (ratio < 1.0) {
      const double next_weight = std::exp(log_weight + log_nu - std::log(j + 1.0));
      const double tail_bound = next_weight / (1.0 - ratio);
      if (tail_bound <= kMarcumRelativeTail * sum || tail_bound < 1e-300) {
        return std::clamp(sum, 0.0, 1.0);
      }
    }
  }
  std::ostringstream msg;
  msg << "marcum_q: series did not converge within " << kMarcumTermCap << " terms (m=" << m
      << ", a=" << a << ", b=" << b << ", partial sum=" << sum << ")";
  throw NumericError(msg.str());
}

}  // namespace ehcr::numerics
