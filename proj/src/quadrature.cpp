#include "brlab/quadrature.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

// Three-term recurrence for P_n^{(a,b)}(x); returns {P_n, P_{n-1}}.
std::pair<double, double> jacobi_pair(int n, double a, double b, double x) {
  double prev = 1.0;
  double cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  if (n == 0) return {prev, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double jacobi_derivative(int n, double a, double b, double x, double pn, double pn1) {
  const double s = 2.0 * n + a + b;
  return (n * ((a - b) - s * x) * pn + 2.0 * (n + a) * (n + b) * pn1) / (s * (1.0 - x * x));
}

}  // namespace

QuadratureRule<double> gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("quadrature size must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi weight exponents must exceed -1");

  // Symmetric Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double beta = (k == 1) ? 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
                                 : 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }

  Eigen::VectorXd x(n);
  if (n == 1) {
    x(0) = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    x = solver.eigenvalues();
  }

  const double log_const = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) - std::lgamma(n + ab + 1.0) -
                           std::lgamma(n + 1.0) + (ab + 1.0) * std::log(2.0);
  QuadratureRule<double> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = x(i);
    double deriv = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
      const auto [pn, pn1] = jacobi_pair(n, a, b, xi);
      deriv = jacobi_derivative(n, a, b, xi, pn, pn1);
      const double step = pn / deriv;
      xi -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(xi))) break;
    }
    const auto [pn, pn1] = jacobi_pair(n, a, b, xi);
    deriv = jacobi_derivative(n, a, b, xi, pn, pn1);
    rule.nodes(i) = xi;
    rule.weights(i) = std::exp(log_const) / ((1.0 - xi * xi) * deriv * deriv);
  }
  return rule;
}

std::shared_ptr<const QuadratureRule<double>> cached_gauss_jacobi(int n, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const QuadratureRule<double>>> cache;
  const auto key = std::make_tuple(n, a, b);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule<double>>(gauss_jacobi(n, a, b));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace brlab
