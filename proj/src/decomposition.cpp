#include "brlab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

constexpr double kPi = std::numbers::pi;

// Integrand of γ_{j,k}(s) on the uniform t-grid t_i = -1 + 2i/M, i = 0..M-1.
// The endpoint t = ±1 lies outside the slice support, so the trapezoid rule
// reduces to a plain periodic sum.
Eigen::VectorXd slice_samples(const DyadicPiece& piece, double s, const BumpFunction& bump, int intervals) {
  Eigen::VectorXd v(intervals);
  for (int i = 0; i < intervals; ++i) {
    const double t = -1.0 + 2.0 * i / intervals;
    v(i) = phi_j_alpha(std::abs(s), std::abs(t), piece, bump);
  }
  return v;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  const auto m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double BumpFunction::profile(double s) {
  if (!(s > 0.5 && s < 2.0)) return 0.0;
  return std::exp(-1.0 / ((s - 0.5) * (2.0 - s)));
}

double BumpFunction::operator()(double s) const {
  const double top = profile(s);
  if (top == 0.0) return 0.0;
  // Only 2^j s with j ∈ {-1, 0, 1} can land in (1/2, 2).
  const double norm = profile(0.5 * s) + top + profile(2.0 * s);
  return top / norm;
}

DyadicPiece::DyadicPiece(int j_, double alpha_) : j(j_), alpha(alpha_) {
  if (j < 0) throw ValidationError("j", "piece index must be >= 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha", "piece smoothness must be > 0");
}

double phi_j_alpha(double s, double t, const DyadicPiece& piece, const BumpFunction& bump) {
  const double u = 1.0 - s * s - t * t;
  if (!(u > 0.0)) return 0.0;
  const double b = bump(std::ldexp(u, piece.j));
  return b == 0.0 ? 0.0 : std::pow(u, piece.alpha) * b;
}

SampledField t_j_apply(const SampledField& f, const SampledField& g, const DyadicPiece& piece,
                       const BumpFunction& bump, const OperationBudget& budget) {
  return apply_radial_symbol(
      f, g, [&](double s, double t) { return phi_j_alpha(s, t, piece, bump); }, budget);
}

double gamma_coeff(const DyadicPiece& piece, int k, double s, const BumpFunction& bump, int intervals) {
  if (!(std::abs(s) <= 1.0)) throw DomainError("gamma coefficient needs |s| <= 1");
  if (intervals < 2) throw DomainError("gamma quadrature needs at least 2 intervals");
  const Eigen::VectorXd v = slice_samples(piece, s, bump, intervals);
  const double h = 2.0 / intervals;
  double sum = 0.0;
  for (int i = 0; i < intervals; ++i) sum += v(i) * std::cos(kPi * k * (-1.0 + 2.0 * i / intervals));
  return 0.5 * h * sum;
}

GammaTable::GammaTable(const DyadicPiece& piece, int max_k, std::vector<double> s_values, const BumpFunction& bump,
                       int intervals)
    : piece_(piece), max_k_(max_k), s_(std::move(s_values)) {
  if (max_k < 0) throw DomainError("gamma table needs K >= 0");
  if (intervals < 2 * max_k + 2) throw DomainError("gamma quadrature grid too coarse for the requested K");
  values_.resize(static_cast<Eigen::Index>(s_.size()), max_k + 1);
  Eigen::FFT<double> fft;
  std::vector<double> in(intervals);
  std::vector<Complex> out;
  const double h = 2.0 / intervals;
  for (std::size_t r = 0; r < s_.size(); ++r) {
    if (!(std::abs(s_[r]) <= 1.0)) throw DomainError("gamma coefficient needs |s| <= 1");
    const Eigen::VectorXd v = slice_samples(piece_, s_[r], bump, intervals);
    std::copy(v.data(), v.data() + intervals, in.begin());
    // Σ_i v_i e^{-iπk t_i} = (-1)^k Σ_i v_i e^{-2πi k i / M}.
    fft.fwd(out, in);
    for (int k = 0; k <= max_k; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      values_(static_cast<Eigen::Index>(r), k) = 0.5 * h * sign * out[k].real();
    }
  }
}

double GammaTable::sup_abs(int k) const {
  const int c = k < 0 ? -k : k;
  if (c > max_k_) throw DomainError("k outside the gamma table");
  return values_.col(c).cwiseAbs().maxCoeff();
}

std::vector<double> gamma_sup_samples() {
  std::vector<double> s;
  for (int i = 0; i <= 200; ++i) s.push_back(i / 200.0);
  for (int i = 0; i < 64; ++i) {
    const double c = std::exp2(-12.0 + 12.0 * i / 63.0);
    s.push_back(std::sqrt(1.0 - c));
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

GammaDecayReport gamma_decay_check(double alpha, double delta, int j_lo, int j_hi, int k_max,
                                   const BumpFunction& bump) {
  if (!(delta > 0.0 && delta < alpha)) throw DomainError("gamma decay check needs 0 < delta < alpha");
  if (j_lo < 0 || j_hi < j_lo) throw DomainError("gamma decay check needs 0 <= j_lo <= j_hi");
  if (k_max < 0) throw DomainError("gamma decay check needs k_max >= 0");
  GammaDecayReport report{alpha, delta, {}, {}, {}, 0.0, 0.0, false};
  const auto s = gamma_sup_samples();
  std::vector<double> x;
  std::vector<double> y;
  for (int j = j_lo; j <= j_hi; ++j) {
    const GammaTable table(DyadicPiece(j, alpha), k_max, s, bump);
    double best = 0.0;
    for (int k = -k_max; k <= k_max; ++k) {
      const double sup = table.sup_abs(k);
      const double normalized = sup * std::pow(1.0 + std::abs(k), 1.0 + delta) * std::exp2(j * (alpha - delta));
      report.rows.push_back({j, k, sup, normalized});
      best = std::max(best, normalized);
    }
    report.js.push_back(j);
    report.per_j_max.push_back(best);
    report.constant = std::max(report.constant, best);
    x.push_back(j);
    y.push_back(std::log2(best));
  }
  report.log2_slope = least_squares_slope(x, y);
  report.growth_flag = std::exp2(report.log2_slope * (j_hi - j_lo)) > 1.1;
  return report;
}

SampledField br_apply_separable(const SampledField& f, const SampledField& g, const DyadicPiece& piece, int max_k,
                                const BumpFunction& bump) {
  if (max_k < 1) throw ValidationError("K", "rank cutoff must be >= 1");
  if (!(f.grid() == g.grid())) throw ValidationError("grid", "f and g live on different grids");
  const Grid& grid = f.grid();

  // γ_{j,k} is only ever needed at the lattice radii inside [0, 1].
  const Eigen::ArrayXd radii = grid.frequency_radii();
  std::vector<double> s;
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    if (radii(i) <= 1.0) s.push_back(radii(i));
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const int intervals = std::max(kGammaIntervals, 2 * max_k + 2);
  const GammaTable table(piece, max_k, s, bump, intervals);
  auto slot = [&](double r) { return static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), r) - s.begin()); };

  // γ_{j,-k} = γ_{j,k}, so the ±k terms share the f factor and pair
  // e^{iπkλ} + e^{-iπkλ} = 2 cos(πkλ) on the g side.
  SampledField out = SampledField::zeros(grid);
  for (int k = 0; k <= max_k; ++k) {
    const BandSpec fb{0.0, 1.0, [&, k](double r) { return Complex(table(k, slot(r))); }};
    const double pair = k == 0 ? 1.0 : 2.0;
    const BandSpec gb{0.0, 1.0, [k, pair](double r) { return Complex(pair * std::cos(kPi * k * r)); }};
    out = out + band_operator(f, fb) * band_operator(g, gb);
  }
  return out;
}

}  // namespace brlab
