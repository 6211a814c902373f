#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>

namespace brlab {

/// Nodes and weights of an interpolatory rule, ∫ w(x) f(x) dx ≈ Σ weights(i) f(nodes(i)).
template <typename Scalar>
struct QuadratureRule {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector nodes;
  Vector weights;

  Eigen::Index size() const { return nodes.size(); }

  /// Affine map of a rule on [-1, 1] (unit weight) onto [lo, hi].
  QuadratureRule mapped(Scalar lo, Scalar hi) const {
    const Scalar half = (hi - lo) / 2;
    QuadratureRule out;
    out.nodes = (nodes.array() + Scalar(1)) * half + lo;
    out.weights = weights * half;
    return out;
  }
};

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1.
///
/// Nodes start from the eigenvalues of the symmetric Jacobi matrix and are
/// polished by Newton steps on P_n^{(a,b)}; weights come from the closed
/// derivative formula, which keeps the small endpoint weights accurate.
QuadratureRule<double> gauss_jacobi(int n, double a, double b);

inline QuadratureRule<double> gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Process-wide memoized rule; safe to call from several threads.
std::shared_ptr<const QuadratureRule<double>> cached_gauss_jacobi(int n, double a, double b);

/// Composite trapezoid rule on [lo, hi] with `intervals` panels.
template <typename Scalar>
QuadratureRule<Scalar> trapezoid(int intervals, Scalar lo, Scalar hi) {
  QuadratureRule<Scalar> rule;
  const Scalar step = (hi - lo) / Scalar(intervals);
  rule.nodes = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(intervals + 1, lo, hi);
  rule.weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(intervals + 1, step);
  rule.weights(0) = rule.weights(intervals) = step / 2;
  return rule;
}

}  // namespace brlab
