#pragma once

#include <vector>

#include "brlab/grid.hpp"
#include "brlab/operators.hpp"

namespace brlab {

/// Smooth φ ≥ 0 supported in [1/2, 2] with Σ_{j∈Z} φ(2^j s) = 1 for s > 0.
///
/// φ = ψ / Σ_j ψ(2^j ·) with ψ(s) = exp(-1/((s - 1/2)(2 - s))) on (1/2, 2).
/// The normalizer is invariant under s ↦ 2s, so the partition identity holds
/// to rounding.
class BumpFunction {
 public:
  double operator()(double s) const;
  /// The unnormalized profile ψ.
  static double profile(double s);
};

inline BumpFunction make_bump() { return {}; }

/// Index j ≥ 0 and smoothness α > 0 of the slice φ_j^α.
struct DyadicPiece {
  int j = 0;
  double alpha = 1.0;

  DyadicPiece(int j, double alpha);
};

/// φ_j^α(s, t) = (1 - s² - t²)_+^α φ(2^j (1 - s² - t²)).
double phi_j_alpha(double s, double t, const DyadicPiece& piece, const BumpFunction& bump);

/// T_j^α(f, g): the frequency double sum with symbol φ_j^α(|ξ|, |η|).
SampledField t_j_apply(const SampledField& f, const SampledField& g, const DyadicPiece& piece,
                       const BumpFunction& bump, const OperationBudget& budget = {});

inline constexpr int kGammaIntervals = 4096;

/// γ_{j,k}^α(s) = ½ ∫_{-1}^{1} φ_j^α(|s|, |t|) e^{-iπkt} dt by the uniform
/// trapezoid rule. Real because the integrand is real and even in t.
double gamma_coeff(const DyadicPiece& piece, int k, double s, const BumpFunction& bump,
                   int intervals = kGammaIntervals);

/// γ_{j,k}^α(s) for |k| <= K on a fixed list of s values.
class GammaTable {
 public:
  GammaTable(const DyadicPiece& piece, int max_k, std::vector<double> s_values, const BumpFunction& bump,
             int intervals = kGammaIntervals);

  const DyadicPiece& piece() const noexcept { return piece_; }
  int max_k() const noexcept { return max_k_; }
  const std::vector<double>& s_values() const noexcept { return s_; }
  /// γ_{j,k}(s_values[si]); negative k folds onto |k|.
  double operator()(int k, std::size_t si) const { return values_(si, k < 0 ? -k : k); }
  /// max over tabulated s of |γ_{j,k}|.
  double sup_abs(int k) const;

 private:
  DyadicPiece piece_;
  int max_k_;
  std::vector<double> s_;
  Eigen::MatrixXd values_;  // rows: s, cols: k = 0..K
};

/// s sample set used for sup_s: uniform points in [0, 1] plus points
/// s = √(1 - c) with c log-spaced down to 2^{-12}, where the slices of the
/// deeper pieces sit.
std::vector<double> gamma_sup_samples();

struct GammaDecayRow {
  int j;
  int k;
  double sup_abs;     ///< sup_s |γ_{j,k}(s)|
  double normalized;  ///< sup_abs · (1+|k|)^{1+δ} · 2^{j(α-δ)}
};

struct GammaDecayReport {
  double alpha;
  double delta;
  std::vector<GammaDecayRow> rows;
  std::vector<int> js;
  std::vector<double> per_j_max;  ///< max over k of `normalized`
  double constant;                ///< max over all rows
  double log2_slope;              ///< least-squares slope of log₂ per_j_max against j
  bool growth_flag;               ///< fitted trend grows by more than 10% over the j range
};

/// Empirical constant of sup_s |γ_{j,k}^α(s)| (1+|k|)^{1+δ} <= C 2^{-j(α-δ)}
/// over j ∈ [j_lo, j_hi], |k| <= k_max. Requires 0 < δ < α.
GammaDecayReport gamma_decay_check(double alpha, double delta, int j_lo, int j_hi, int k_max,
                                   const BumpFunction& bump);

/// T_j^α through the Fourier expansion in λ₂:
/// Σ_{|k|<=K} [∫₀¹ γ_{j,k}(λ₁) R_{λ₁}f λ₁^{n-1} dλ₁] · [∫₀¹ e^{iπkλ₂} R_{λ₂}g λ₂^{n-1} dλ₂],
/// each bracket a band_operator on [0, 1].
SampledField br_apply_separable(const SampledField& f, const SampledField& g, const DyadicPiece& piece, int max_k,
                                const BumpFunction& bump);

}  // namespace brlab
