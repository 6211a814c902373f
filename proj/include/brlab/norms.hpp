#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "brlab/grid.hpp"
#include "brlab/rational.hpp"

namespace brlab {

/// A bilinear operator on sampled fields. Must be pure.
using BilinearOperator = std::function<SampledField(const SampledField&, const SampledField&)>;

struct Witness {
  std::string id;
  SampledField field;
};

/// ‖T(f, g)‖_p / (‖f‖_{p₁} ‖g‖_{p₂}); 0 when T(f, g) = 0.
double norm_ratio(const BilinearOperator& op, const SampledField& f, const SampledField& g,
                  const ExponentPair& exponents);

/// Lower bound for ‖T‖_{L^{p₁}×L^{p₂}→L^p}, attained by the stored witnesses.
struct NormEstimate {
  double value = 0.0;
  SampledField witness_f;
  SampledField witness_g;
  std::string witness_f_id;
  std::string witness_g_id;
  ExponentPair exponents;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SearchOptions {
  int hill_steps = 50;
  double step = 0.3;
  /// Catalog modulation target; default places each input at |ξ| = 1/√2 so
  /// the pair sits on the unit sphere of R^{2n}.
  double modulation = 0.7071067811865476;
};

/// Witness catalog for an input exponent: Gaussians at 3 widths, balls at 3
/// radii (the smallest a discrete delta), band-limited random fields on 3
/// annuli, each also modulated to `modulation`; for p = ∞ additionally
/// unimodular fields with random band-limited phase and the constant 1.
std::vector<Witness> witness_catalog(const Grid& grid, const Exponent& p, std::uint64_t seed,
                                     double modulation = SearchOptions{}.modulation);

/// Scans every catalog pair, then hill-climbs from the `trials` best pairs.
/// Trial t draws its perturbations from (seed, t) alone, so the estimate is
/// nondecreasing in `trials`.
NormEstimate estimate_bilinear_norm(const BilinearOperator& op, const ExponentPair& exponents, const Grid& grid,
                                    int trials, std::uint64_t seed, const SearchOptions& options = {});

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS residual in log₂ units
};

/// Least squares fit of log₂ y against x; needs at least 4 points, all y > 0.
LogFit fit_log2(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFit {
  std::vector<int> js;
  std::vector<double> norms;
  std::vector<std::string> witness_ids;  ///< "f_id|g_id" per j
  double slope = 0.0;
  double epsilon = 0.0;  ///< -slope
  double residual = 0.0;
  bool degenerate = false;  ///< some estimate vanished; no fit
};

/// Per-j lower bounds for ‖T_j‖ and the fitted ε in ‖T_j‖ ≈ 2^{-εj}.
DecayFit decay_fit(const std::function<BilinearOperator(int)>& family, const ExponentPair& exponents,
                   const Grid& grid, const std::vector<int>& js, int trials, std::uint64_t seed,
                   const SearchOptions& options = {});

struct ScalingReport {
  Exponent p;
  double b;
  std::vector<double> widths;
  std::vector<double> estimates;
  std::vector<std::string> witness_ids;
  std::optional<LogFit> fit;  ///< against log₂(w b^{n-1}); absent with < 4 widths
  double predicted;           ///< 1/p - 1/2
};

/// sup_f ‖T_m f‖₂ / ‖f‖_p for m ≡ 1 on bands [b - w, b], over a catalog of
/// band-adapted witnesses (modulated Gaussians of width ~1/w, a discrete
/// delta, random fields in the band) refined by hill climbing.
ScalingReport lemma1_scaling_experiment(const Exponent& p, double b, const std::vector<double>& widths,
                                        const Grid& grid, std::uint64_t seed, const SearchOptions& options = {});

/// L¹ × L^∞ → L¹ lower bound for S^α with R = 1 (oracle path).
NormEstimate corollary_experiment(double alpha, const Grid& grid, int trials, std::uint64_t seed,
                                  const SearchOptions& options = {});

/// CSV rows (j, estimate, witness).
void write_decay_csv(const std::string& path, const DecayFit& fit);
/// CSV rows (w, estimate, witness).
void write_scaling_csv(const std::string& path, const ScalingReport& report);
/// JSON record of the estimate; the witnesses are saved next to it as
/// `<stem>_f.bin` and `<stem>_g.bin` and referenced by file name.
void write_norm_estimate(const std::string& directory, const std::string& stem, const NormEstimate& estimate);

}  // namespace brlab
