#pragma once

#include <Eigen/Core>

#include "brlab/errors.hpp"

namespace brlab {

/// Real Bessel order k > -1/2, the range covered by the Poisson integral.
class BesselOrder {
 public:
  explicit BesselOrder(double k);
  double value() const noexcept { return k_; }

 private:
  double k_;
};

/// Largest argument for which the fixed 256-node Poisson-integral oracle is
/// trusted.
inline constexpr double kOracleReliableArgument = 200.0;

/// J_k(r) for r >= 0.
///
/// Power series below r = max(12, 2k); above it, Hankel's large-argument
/// expansion for the two lowest orders with the same fractional part,
/// followed by upward recurrence (stable because k <= r/2 there).
double bessel_j(BesselOrder k, double r);

/// Independent reference for J_k: Gauss-Jacobi quadrature of the Poisson
/// integral (r/2)^k / (Γ(k+1/2) √π) ∫_{-1}^{1} e^{irt} (1-t²)^{k-1/2} dt with
/// the factor (1-t²)^{k-1/2} absorbed in the weight.
Flagged<double> bessel_j_oracle(BesselOrder k, double r);

/// |S^{n-1}| = 2 π^{n/2} / Γ(n/2).
double sphere_area(int n);

/// Fourier transform of surface measure on the sphere of radius `lambda`
/// pulled back to the unit sphere: φ_λ(x) = \hat{dσ}(λx), as a function of
/// |x|.  For n = 1 the "sphere" is {-1, 1} and φ_λ(x) = 2 cos(2πλ|x|).
double sphere_ft_radial(double lambda, double radius, int n);

template <typename Derived>
double sphere_ft(double lambda, const Eigen::MatrixBase<Derived>& x) {
  return sphere_ft_radial(lambda, x.norm(), static_cast<int>(x.size()));
}

}  // namespace brlab
