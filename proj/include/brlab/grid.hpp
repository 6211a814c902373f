#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include "brlab/rational.hpp"

namespace brlab {

using Complex = std::complex<double>;

/// Uniform periodic grid on [0, L)^n with N samples per axis.
///
/// Samples sit at x_k = (L/N) k, k ∈ {0..N-1}^n; the dual lattice is
/// {m/L : -N/2 <= m < N/2}^n, stored in DFT order (index b ↔ m = b or b - N).
/// Flat indices are row-major with axis 0 slowest.
class Grid {
 public:
  Grid(int dim, int samples, double side);

  int dim() const noexcept { return dim_; }
  int samples() const noexcept { return samples_; }
  double side() const noexcept { return side_; }

  Eigen::Index size() const noexcept { return dim_ == 1 ? samples_ : Eigen::Index(samples_) * samples_; }
  double spacing() const noexcept { return side_ / samples_; }
  double cell_measure() const noexcept { return dim_ == 1 ? spacing() : spacing() * spacing(); }
  double frequency_spacing() const noexcept { return 1.0 / side_; }
  /// Largest representable frequency modulus per axis, N / (2L).
  double nyquist() const noexcept { return samples_ / (2.0 * side_); }

  /// k ↦ k for k < N/2, k - N otherwise.
  int signed_index(int k) const noexcept { return k < samples_ / 2 ? k : k - samples_; }
  std::array<int, 2> multi_index(Eigen::Index flat) const noexcept;
  /// Flat index of an integer tuple, reduced modulo N on every axis.
  Eigen::Index wrap(int i0, int i1 = 0) const noexcept;

  /// Signed lattice frequency (m/L) of DFT bin `flat`.
  Eigen::Vector2d frequency(Eigen::Index flat) const noexcept;
  /// |ξ| for every DFT bin.
  Eigen::ArrayXd frequency_radii() const;
  /// Squared integer lattice radius |m|² of every DFT bin.
  Eigen::ArrayXi lattice_radius_squared() const;
  /// Minimal-image displacement of sample `flat` from `center` (only the
  /// first `dim` entries are meaningful).
  Eigen::Vector2d displacement(Eigen::Index flat, const Eigen::Vector2d& center = Eigen::Vector2d::Zero()) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept = default;

 private:
  int dim_;
  int samples_;
  double side_;
};

/// Complex samples of a function on a Grid. Immutable after construction.
class SampledField {
 public:
  SampledField(Grid grid, Eigen::ArrayXcd values);
  static SampledField zeros(const Grid& grid) { return {grid, Eigen::ArrayXcd::Zero(grid.size())}; }

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::ArrayXcd& values() const noexcept { return values_; }
  Complex operator[](Eigen::Index i) const { return values_(i); }

  friend SampledField operator+(const SampledField& a, const SampledField& b);
  friend SampledField operator-(const SampledField& a, const SampledField& b);
  friend SampledField operator*(Complex c, const SampledField& a) { return {a.grid_, c * a.values_}; }
  /// Pointwise product.
  friend SampledField operator*(const SampledField& a, const SampledField& b);

 private:
  Grid grid_;
  Eigen::ArrayXcd values_;
};

/// \hat f(ξ_m) ≈ (L/N)^n Σ_k f(x_k) e^{-2πi x_k·ξ_m}.
SampledField dft_forward(const SampledField& f);
/// f(x_k) = L^{-n} Σ_m F(ξ_m) e^{2πi x_k·ξ_m}; exact inverse of dft_forward.
SampledField dft_inverse(const SampledField& spectrum);

/// ((L/N)^n Σ |f|^p)^{1/p}, a quasi-norm for p < 1; max |f| for p = ∞.
double lp_norm(const SampledField& f, const Exponent& p);
/// Relative L² distance ‖a - b‖₂ / ‖b‖₂ (0 when both vanish).
double relative_l2_error(const SampledField& a, const SampledField& b);

enum class FieldKind { gaussian, ball_indicator, band_limited_random, bump };

std::string to_string(FieldKind kind);
FieldKind parse_field_kind(const std::string& text);

struct FieldParams {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double width = 1.0;   ///< gaussian: e^{-π|x-c|²/width²}
  double radius = 1.0;  ///< ball_indicator, bump
  double band_lo = 0.0; ///< band_limited_random annulus
  double band_hi = 1.0;
};

/// Deterministic witness/test field. band_limited_random fields are
/// normalized to unit L² norm; their spectrum vanishes off the annulus.
SampledField make_test_field(FieldKind kind, const FieldParams& params, const Grid& grid, std::uint64_t seed);

/// f(x) e^{2πi x·ω}, with ω snapped to the nearest lattice frequency so the
/// result stays periodic.
SampledField modulate(const SampledField& f, const Eigen::Vector2d& frequency);

// Field files. CSV: header "i0[,i1],re,im" then one row per sample.
// Binary: little-endian u32 n, u32 N, then N^n (re, im) float64 pairs.
void write_field_csv(const std::string& path, const SampledField& f);
SampledField read_field_csv(const std::string& path, double side);
void write_field_binary(const std::string& path, const SampledField& f);
SampledField read_field_binary(const std::string& path, double side);

}  // namespace brlab
