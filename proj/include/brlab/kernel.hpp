#pragma once

#include <Eigen/Core>
#include <vector>

#include "brlab/decomposition.hpp"
#include "brlab/errors.hpp"

namespace brlab {

/// (x₁, x₂) ∈ R^n × R^n, viewed as a point of R^{2n}.
struct KernelPoint {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;

  KernelPoint(Eigen::VectorXd a, Eigen::VectorXd b);
  /// Point with |x₁| = ρ cos θ, |x₂| = ρ sin θ along the first axis.
  static KernelPoint polar(int n, double rho, double theta);

  int dim() const noexcept { return static_cast<int>(x1.size()); }
  double rho() const { return std::sqrt(x1.squaredNorm() + x2.squaredNorm()); }
  KernelPoint scaled(double factor) const { return {factor * x1, factor * x2}; }
};

/// Effective oscillation R·ρ beyond which the quadrature paths raise the
/// accuracy warning.
inline constexpr double kKernelOscillationBudget = 200.0;

/// S^α(x₁,x₂) = Γ(1+α) / (π^α ρ^{n+α}) J_{n+α}(2πρ); at ρ = 0 the limit
/// π^n Γ(α+1) / Γ(n+α+1).
double kernel_closed_form(const KernelPoint& pt, double alpha);
/// Same, as a function of n and ρ = |(x₁,x₂)|.
double kernel_closed_form_radial(int n, double rho, double alpha);

/// S_R^α(x₁,x₂) by tensor quadrature of the radial double integral in polar
/// coordinates (λ₁, λ₂) = r (cos θ, sin θ): Gauss-Jacobi in r carrying
/// (1 - r/R)^α, Gauss-Legendre in θ. Node counts grow with R·ρ and never
/// fall below `nodes`.
Flagged<double> kernel_quadrature(const KernelPoint& pt, double alpha, double radius = 1.0, int nodes = 128);

/// |S_R(x) - R^{2n} S_1(Rx)| / (|R^{2n} S_1(Rx)| + floor), with S_R from
/// kernel_quadrature and S_1 from the closed form. The floor is
/// √ε_mach · S_R(0), the smallest kernel magnitude the cancelling quadrature
/// sum resolves.
double dilation_check(const KernelPoint& pt, double alpha, double radius, int nodes = 128);

/// Piece kernel K_j^α(x₁,x₂) = ∫∫ φ_j^α(λ₁,λ₂) φ_{λ₁}(x₁) φ_{λ₂}(x₂) λ₁^{n-1} λ₂^{n-1}.
Flagged<double> kj_kernel(const KernelPoint& pt, const DyadicPiece& piece, const BumpFunction& bump,
                          int nodes = 128);

struct EnvelopeReport {
  double alpha;
  double power;                   ///< M
  std::vector<int> js;
  std::vector<double> constants;  ///< C_j
  double log2_slope;              ///< least-squares slope of log₂ C_j against j
};

/// C_j = max over samples of |K_j| / [2^{-jα} 2^{-j} (1+2^{-j}|x₁|)^{-M} (1+2^{-j}|x₂|)^{-M}].
EnvelopeReport envelope_fit(double alpha, const std::vector<int>& js, double power,
                            const std::vector<KernelPoint>& samples, const BumpFunction& bump, int nodes = 128);

/// Same, for several M at once from a single table of K_j values.
std::vector<EnvelopeReport> envelope_fit(double alpha, const std::vector<int>& js, const std::vector<double>& powers,
                                         const std::vector<KernelPoint>& samples, const BumpFunction& bump,
                                         int nodes = 128);

/// Points ρ (cos θ, sin θ) on `radii` equispaced radii in [0, rho_max] and
/// `angles` equispaced angles in [0, π/2].
std::vector<KernelPoint> radial_samples(int n, double rho_max, int radii, int angles);

struct DecayExponentFit {
  double exponent;  ///< fitted slope of log |S^α| at local maxima against log ρ
  int maxima;       ///< number of local maxima used
};

/// Log-log fit of the local maxima of |S^α(ρ)| on [rho_lo, rho_hi].
DecayExponentFit kernel_decay_fit(int n, double alpha, double rho_lo, double rho_hi, int samples_per_unit = 1000);

}  // namespace brlab
