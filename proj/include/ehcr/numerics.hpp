#pragma once

namespace ehcr::numerics {

/// Regularized upper incomplete gamma function Γ(m, x)/Γ(m) for integer
/// order, evaluated through the finite Poisson sum e^{-x} Σ_{k<m} x^k/k!.
/// Throws DomainError for m < 1 or x < 0.
double regularized_upper_gamma_int(int m, double x);

/// Generalized Marcum Q-function Q_m(a, b) for integer order m ≥ 1.
///
/// Evaluated as the Poisson(a²/2) mixture of Γ(m+j, b²/2)/Γ(m+j), which is
/// the modified-Bessel series regrouped into nonnegative terms. Summation
/// stops once the remaining Poisson mass is below 1e-12 of the partial sum;
/// more than kMarcumTermCap terms raises NumericError.
double marcum_q(int m, double a, double b);

inline constexpr int kMarcumTermCap = 10000;
inline constexpr double kMarcumRelativeTail = 1e-12;

}  // namespace ehcr::numerics
