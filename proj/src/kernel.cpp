#include "brlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "brlab/bessel.hpp"
#include "brlab/quadrature.hpp"

namespace brlab {
namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("kernel smoothness alpha must be >= 0");
}

// ∫∫ over the quarter disc of radius R of
//   weight(r) φ_{r cos θ}(x₁) φ_{r sin θ}(x₂) (r² cos θ sin θ)^{n-1} r dr dθ,
// where `rule` integrates in r and `radial(r)` supplies the remaining radial
// factor.
template <typename Radial>
double polar_integral(const KernelPoint& pt, const QuadratureRule<double>& rule_r,
                      const QuadratureRule<double>& rule_t, Radial radial) {
  const int n = pt.dim();
  const double a = pt.x1.norm();
  const double b = pt.x2.norm();
  double total = 0.0;
  for (Eigen::Index it = 0; it < rule_t.size(); ++it) {
    const double c = std::cos(rule_t.nodes(it));
    const double s = std::sin(rule_t.nodes(it));
    const double angular = n == 1 ? 1.0 : c * s;
    double inner = 0.0;
    for (Eigen::Index ir = 0; ir < rule_r.size(); ++ir) {
      const double r = rule_r.nodes(ir);
      if (r <= 0.0) continue;
      const double l1 = r * c;
      const double l2 = r * s;
      const double f1 = l1 > 0.0 ? sphere_ft_radial(l1, a, n) : sphere_area(n);
      const double f2 = l2 > 0.0 ? sphere_ft_radial(l2, b, n) : sphere_area(n);
      inner += rule_r.weights(ir) * radial(r) * f1 * f2 * std::pow(r, 2 * n - 1);
    }
    total += rule_t.weights(it) * std::pow(angular, n - 1) * inner;
  }
  return total;
}

int oscillation_nodes(double phase, int minimum) {
  return std::max(minimum, static_cast<int>(std::ceil(phase)) + 48);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
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

KernelPoint::KernelPoint(Eigen::VectorXd a, Eigen::VectorXd b) : x1(std::move(a)), x2(std::move(b)) {
  if (x1.size() != x2.size() || x1.size() < 1) throw DomainError("kernel point halves must share a dimension >= 1");
}

KernelPoint KernelPoint::polar(int n, double rho, double theta) {
  if (n < 1) throw DomainError("kernel dimension must be >= 1");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  a(0) = rho * std::cos(theta);
  b(0) = rho * std::sin(theta);
  return {a, b};
}

double kernel_closed_form_radial(int n, double rho, double alpha) {
  require_alpha(alpha);
  if (n < 1) throw DomainError("kernel dimension must be >= 1");
  if (!(rho >= 0.0)) throw DomainError("kernel radius must be >= 0");
  const double nu = n + alpha;
  const double at_zero = std::exp(n * std::log(kPi) + std::lgamma(alpha + 1.0) - std::lgamma(nu + 1.0));
  const double z = kPi * rho;
  if (z < 1e-6) return at_zero * (1.0 - z * z / (nu + 1.0));
  return std::exp(std::lgamma(1.0 + alpha) - alpha * std::log(kPi) - nu * std::log(rho)) *
         bessel_j(BesselOrder(nu), 2.0 * kPi * rho);
}

double kernel_closed_form(const KernelPoint& pt, double alpha) {
  return kernel_closed_form_radial(pt.dim(), pt.rho(), alpha);
}

Flagged<double> kernel_quadrature(const KernelPoint& pt, double alpha, double radius, int nodes) {
  require_alpha(alpha);
  if (!(radius > 0.0)) throw DomainError("kernel radius R must be positive");
  const double phase = radius * pt.rho();
  // (1 - r²/R²)^α = (1 - r/R)^α (1 + r/R)^α; the first factor lives in the
  // Jacobi weight.
  const auto rule_r = cached_gauss_jacobi(oscillation_nodes(0.75 * kPi * phase, nodes), alpha, 0.0)->mapped(0.0, radius);
  const auto rule_t = cached_gauss_jacobi(oscillation_nodes(0.375 * kPi * kPi * phase, nodes), 0.0, 0.0)
                          ->mapped(0.0, kPi / 2);
  // mapped() scales the weights by R/2 but the Jacobi factor (1-u)^α with
  // u ∈ [-1, 1] is 2^α (1 - r/R)^α.
  const double jacobi = std::pow(2.0, -alpha);
  const double value = polar_integral(pt, rule_r, rule_t, [&](double r) { return jacobi * std::pow(1.0 + r / radius, alpha); });
  return {value, phase > kKernelOscillationBudget};
}

double dilation_check(const KernelPoint& pt, double alpha, double radius, int nodes) {
  const int n = pt.dim();
  const double scale = std::pow(radius, 2 * n);
  const double ref = scale * kernel_closed_form(pt.scaled(radius), alpha);
  const double floor = std::sqrt(std::numeric_limits<double>::epsilon()) * scale * kernel_closed_form_radial(n, 0.0, alpha);
  const double quad = kernel_quadrature(pt, alpha, radius, nodes).value;
  return std::abs(quad - ref) / (std::abs(ref) + floor);
}

Flagged<double> kj_kernel(const KernelPoint& pt, const DyadicPiece& piece, const BumpFunction& bump, int nodes) {
  // φ_j^α depends on u = 1 - r² only; its support is 2^{-j-1} <= u <= 2^{1-j}.
  const double u_lo = std::ldexp(1.0, -piece.j - 1);
  const double u_hi = std::min(1.0, std::ldexp(1.0, 1 - piece.j));
  const double phase = pt.rho();
  // The slice is smooth but steep at its edges; integrate in u where the
  // bump has a fixed shape, then change variables r dr = du / 2.
  const auto rule_u = cached_gauss_jacobi(oscillation_nodes(2.0 * kPi * phase, nodes), 0.0, 0.0)->mapped(u_lo, u_hi);
  const auto rule_t = cached_gauss_jacobi(oscillation_nodes(0.375 * kPi * kPi * phase, nodes), 0.0, 0.0)
                          ->mapped(0.0, kPi / 2);
  QuadratureRule<double> rule_r;
  rule_r.nodes = (1.0 - rule_u.nodes.array()).sqrt().matrix();
  rule_r.weights = rule_u.weights;
  for (Eigen::Index i = 0; i < rule_r.size(); ++i) {
    // polar_integral multiplies by r^{2n-1}; du/2 = r dr leaves 1/(2r).
    rule_r.weights(i) *= rule_r.nodes(i) > 0.0 ? 0.5 / rule_r.nodes(i) : 0.0;
  }
  const double value = polar_integral(pt, rule_r, rule_t, [&](double r) { return phi_j_alpha(r, 0.0, piece, bump); });
  return {value, phase > kKernelOscillationBudget};
}

namespace {

EnvelopeReport envelope_from_table(double alpha, const std::vector<int>& js, double power,
                                   const std::vector<KernelPoint>& samples, const Eigen::MatrixXd& table) {
  if (!(power > 0.0)) throw DomainError("envelope power M must be positive");
  EnvelopeReport report{alpha, power, js, {}, 0.0};
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t a = 0; a < js.size(); ++a) {
    const int j = js[a];
    const double scale = std::ldexp(1.0, -j);
    double c = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const double env = std::pow(scale, alpha) * scale * std::pow(1.0 + scale * samples[s].x1.norm(), -power) *
                         std::pow(1.0 + scale * samples[s].x2.norm(), -power);
      c = std::max(c, std::abs(table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(s))) / env);
    }
    report.constants.push_back(c);
    x.push_back(j);
    y.push_back(std::log2(c));
  }
  report.log2_slope = least_squares_slope(x, y);
  return report;
}

}  // namespace

std::vector<EnvelopeReport> envelope_fit(double alpha, const std::vector<int>& js, const std::vector<double>& powers,
                                         const std::vector<KernelPoint>& samples, const BumpFunction& bump,
                                         int nodes) {
  if (js.empty() || samples.empty()) throw DomainError("envelope fit needs pieces and sample points");
  Eigen::MatrixXd table(static_cast<Eigen::Index>(js.size()), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t a = 0; a < js.size(); ++a) {
    const DyadicPiece piece(js[a], alpha);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(s)) = kj_kernel(samples[s], piece, bump, nodes).value;
    }
  }
  std::vector<EnvelopeReport> out;
  for (double m : powers) out.push_back(envelope_from_table(alpha, js, m, samples, table));
  return out;
}

EnvelopeReport envelope_fit(double alpha, const std::vector<int>& js, double power,
                            const std::vector<KernelPoint>& samples, const BumpFunction& bump, int nodes) {
  return envelope_fit(alpha, js, std::vector<double>{power}, samples, bump, nodes).front();
}

std::vector<KernelPoint> radial_samples(int n, double rho_max, int radii, int angles) {
  if (radii < 1 || angles < 1 || !(rho_max >= 0.0)) throw DomainError("empty sample range");
  std::vector<KernelPoint> out;
  out.push_back(KernelPoint::polar(n, 0.0, 0.0));
  for (int i = 1; i < radii; ++i) {
    const double rho = rho_max * i / (radii - 1);
    for (int a = 0; a < angles; ++a) {
      const double theta = angles == 1 ? 0.0 : (kPi / 2) * a / (angles - 1);
      out.push_back(KernelPoint::polar(n, rho, theta));
    }
  }
  return out;
}

DecayExponentFit kernel_decay_fit(int n, double alpha, double rho_lo, double rho_hi, int samples_per_unit) {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo)) throw DomainError("decay fit needs 0 < rho_lo < rho_hi");
  if (samples_per_unit < 4) throw DomainError("decay fit needs at least 4 samples per unit");
  const auto count = static_cast<long>(std::ceil((rho_hi - rho_lo) * samples_per_unit)) + 1;
  std::vector<double> rho(count);
  std::vector<double> val(count);
  for (long i = 0; i < count; ++i) {
    rho[i] = rho_lo + (rho_hi - rho_lo) * i / (count - 1);
    val[i] = std::abs(kernel_closed_form_radial(n, rho[i], alpha));
  }
  std::vector<double> x;
  std::vector<double> y;
  for (long i = 1; i + 1 < count; ++i) {
    if (val[i] > val[i - 1] && val[i] >= val[i + 1]) {
      x.push_back(std::log(rho[i]));
      y.push_back(std::log(val[i]));
    }
  }
  if (x.size() < 3) throw DomainError("too few local maxima for a decay fit");
  return {-least_squares_slope(x, y), static_cast<int>(x.size())};
}

}  // namespace brlab
