#include "brlab/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "brlab/quadrature.hpp"

namespace brlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOracleNodes = 256;

// log of (r/2)^k / Γ(k+1); callers exponentiate after an overflow check.
double checked_exp(double log_value) {
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw OverflowError("Bessel prefactor exceeds double range");
  }
  return std::exp(log_value);
}

double series(double k, double r) {
  const long double q = -static_cast<long double>(r) * r / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 1000; ++m) {
    term *= q / (static_cast<long double>(m) * (k + m));
    sum += term;
    if (m > r / 2 && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum) * checked_exp(k * std::log(r / 2.0) - std::lgamma(k + 1.0));
}

// Hankel's expansion; only used for orders in [0, 2) and r >= 12.
double hankel(double nu, double r) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int m = 1; m < 200; ++m) {
    const double odd = 2.0 * m - 1.0;
    const double next = term * (mu - odd * odd) / (m * 8.0 * r);
    if (next == 0.0 || std::abs(next) > std::abs(term)) break;
    term = next;
    // t_m enters P (even m) or Q (odd m) with sign (-1)^{floor(m/2)}.
    const double signed_term = ((m / 2) % 2 == 0) ? term : -term;
    (m % 2 == 0 ? p : q) += signed_term;
    // Past the sign change of (mu - odd^2) the terms shrink monotonically
    // until the series starts to diverge.
    if (odd * odd > mu && std::abs(term) < 1e-17) break;
  }
  const double phase = (nu / 2.0 + 0.25) * kPi;
  const double c = std::cos(r) * std::cos(phase) + std::sin(r) * std::sin(phase);
  const double s = std::sin(r) * std::cos(phase) - std::cos(r) * std::sin(phase);
  return std::sqrt(2.0 / (kPi * r)) * (p * c - q * s);
}

}  // namespace

BesselOrder::BesselOrder(double k) : k_(k) {
  if (!(k > -0.5)) throw DomainError("Bessel order must exceed -1/2, got " + std::to_string(k));
}

double bessel_j(BesselOrder order, double r) {
  const double k = order.value();
  if (!(r >= 0.0)) throw DomainError("Bessel argument must be nonnegative");
  if (r == 0.0) return k == 0.0 ? 1.0 : 0.0;
  if (r < std::max(12.0, 2.0 * k)) return series(k, r);

  const double base = k - std::floor(k);
  const int steps = static_cast<int>(std::floor(k));
  double lower = hankel(base, r);
  if (steps == 0) return lower;
  double upper = hankel(base + 1.0, r);
  for (int m = 1; m < steps; ++m) {
    const double next = 2.0 * (base + m) / r * upper - lower;
    lower = upper;
    upper = next;
  }
  return upper;
}

Flagged<double> bessel_j_oracle(BesselOrder order, double r) {
  const double k = order.value();
  if (!(r >= 0.0)) throw DomainError("Bessel argument must be nonnegative");
  Flagged<double> out;
  out.accuracy_warning = r > kOracleReliableArgument;
  if (r == 0.0) {
    out.value = k == 0.0 ? 1.0 : 0.0;
    return out;
  }
  const auto rule = cached_gauss_jacobi(kOracleNodes, k - 0.5, k - 0.5);
  // The sine part of e^{irt} integrates to zero against the even weight.
  long double integral = 0.0L;
  for (Eigen::Index i = 0; i < rule->size(); ++i) {
    integral += static_cast<long double>(rule->weights(i)) * std::cos(r * rule->nodes(i));
  }
  const double log_pref = k * std::log(r / 2.0) - std::lgamma(k + 0.5) - 0.5 * std::log(kPi);
  out.value = static_cast<double>(integral) * checked_exp(log_pref);
  return out;
}

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere dimension must be at least 1");
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

double sphere_ft_radial(double lambda, double radius, int n) {
  if (!(lambda > 0.0)) throw DomainError("sphere_ft requires lambda > 0");
  if (n < 1) throw DomainError("sphere dimension must be at least 1");
  const double s = lambda * radius;
  if (n == 1) return 2.0 * std::cos(2.0 * kPi * s);
  const double nu = (n - 2) / 2.0;
  const double z = 2.0 * kPi * s;
  if (z < 1e-8) {
    // Two leading terms of the series of s^{-ν} J_ν(2πs).
    return 2.0 * std::pow(kPi, nu + 1.0) / std::tgamma(nu + 1.0) * (1.0 - z * z / (4.0 * (nu + 1.0)));
  }
  return 2.0 * kPi * std::pow(s, -nu) * bessel_j(BesselOrder(nu), z);
}

}  // namespace brlab
