#pragma once

#include <cstdint>
#include <functional>

#include "brlab/grid.hpp"

namespace brlab {

/// Symbol (1 - (|ξ|² + |η|²)/R²)_+^α of the bilinear Bochner-Riesz means.
struct MultiplierSpec {
  double alpha = 0.0;
  double radius = 1.0;

  void validate() const;
  /// Closed ball for α = 0; exactly zero on the sphere for α > 0.
  double operator()(double s, double t) const;
};

/// A bounded radial multiplier m on the band a <= |ξ| <= b.
struct BandSpec {
  double a = 0.0;
  double b = 1.0;
  std::function<Complex(double)> m = [](double) { return Complex(1.0); };

  void validate() const;
};

/// Cap on the number of lattice-pair operations of the quadratic paths.
struct OperationBudget {
  std::uint64_t max_pair_ops = std::uint64_t{1} << 26;
};

/// m(|ξ|, |η|) for a bilinear radial multiplier.
using RadialSymbol = std::function<double(double, double)>;

struct RestrictionResult {
  SampledField density;  ///< λ^{n-1} R_λ f
  bool empty_annulus = false;
};

/// Annulus discretization of the restriction operator: the inverse transform
/// of \hat f on λ - width/2 <= |ξ| <= λ + width/2, divided by the width.
/// Summing density·width over a partition of [0, ∞) reassembles f, which is
/// the discrete form of ∫ R_λ f λ^{n-1} dλ = f.
RestrictionResult restriction(const SampledField& f, double lambda, double width);

/// T_m f = f * G_m, evaluated exactly in frequency: inverse transform of
/// χ_{[a,b]}(|ξ|) m(|ξ|) \hat f(ξ).
SampledField band_operator(const SampledField& f, const BandSpec& band);

/// Slow reference for band_operator: midpoint rule in λ over `nodes` bins of
/// [a, b], each bin contributing m(λ_i) times its annulus component.
SampledField band_operator_quadrature(const SampledField& f, const BandSpec& band, int nodes);

/// Direct double sum over all lattice pairs (ξ, η):
/// L^{-2n} Σ m(|ξ|,|η|) \hat f(ξ) \hat g(η) e^{2πi x·(ξ+η)}, accumulated in
/// lexicographic pair order. Exact at the sample points for the periodic
/// problem.
SampledField apply_radial_symbol(const SampledField& f, const SampledField& g, const RadialSymbol& symbol,
                                 const OperationBudget& budget = {});

/// Reference path: apply_radial_symbol with the Bochner-Riesz symbol.
SampledField br_apply_oracle(const SampledField& f, const SampledField& g, const MultiplierSpec& spec,
                             const OperationBudget& budget = {});

/// Radial path: ∫∫ m(λ₁,λ₂) R_{λ₁}f R_{λ₂}g λ₁^{n-1} λ₂^{n-1} dλ₁ dλ₂ as a
/// double sum over restriction densities.
///
/// nodes = 0 uses the distinct lattice radii in [0, R] as λ-nodes (every
/// lattice frequency sits exactly on its node). nodes > 0 uses the midpoint
/// rule on `nodes` half-open bins of [0, R); the symbol is then evaluated at
/// bin centers and the error is first order in R/nodes.
SampledField br_apply_radial(const SampledField& f, const SampledField& g, const MultiplierSpec& spec, int nodes = 0);

/// Spatial path: (L/N)^{2n} Σ_{x₁,x₂} f(x - x₁) g(x - x₂) S_R^α(x₁, x₂) with the
/// closed-form kernel on minimal-image offsets.
SampledField br_apply_kernel(const SampledField& f, const SampledField& g, const MultiplierSpec& spec,
                             const OperationBudget& budget = {});

}  // namespace brlab
