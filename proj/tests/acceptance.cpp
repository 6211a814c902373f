#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "brlab/bessel.hpp"
#include "brlab/decomposition.hpp"
#include "brlab/kernel.hpp"
#include "brlab/norms.hpp"
#include "brlab/operators.hpp"
#include "brlab/regions.hpp"

using namespace brlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

SampledField gaussian(const Grid& grid, double width, double c) {
  FieldParams p;
  p.center = Eigen::Vector2d::Constant(c);
  p.width = width;
  return make_test_field(FieldKind::gaussian, p, grid, 0);
}

Outcome bessel_cross_validation() {
  double worst = 0.0;
  for (double k : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) {
    for (int i = 0; i < 40; ++i) {
      const double r = 0.01 * std::pow(200.0 / 0.01, i / 39.0);
      worst = std::max(worst, std::abs(bessel_j(BesselOrder(k), r) - bessel_j_oracle(BesselOrder(k), r).value));
    }
  }
  double half = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double r = 0.01 * std::pow(200.0 / 0.01, i / 39.0);
    half = std::max(half, std::abs(bessel_j(BesselOrder(0.5), r) - std::sqrt(2.0 / (std::numbers::pi * r)) * std::sin(r)));
  }
  return {worst < 1e-9 && half < 1e-10, fmt("max |J - oracle| %.2e, max |J_1/2 - closed form| %.2e", worst, half)};
}

Outcome kernel_identity() {
  double worst = 0.0;
  double dilation = 0.0;
  for (int n : {1, 2}) {
    for (double alpha : {1.0, 2.0, 5.0}) {
      for (int i = 0; i < 20; ++i) {
        const auto pt = KernelPoint::polar(n, 50.0 * i / 19.0, 0.3);
        worst = std::max(worst, std::abs(kernel_quadrature(pt, alpha).value - kernel_closed_form(pt, alpha)));
        for (double R : {0.5, 1.0, 2.0, 4.0}) dilation = std::max(dilation, dilation_check(pt, alpha, R));
      }
    }
  }
  return {worst < 1e-6 && dilation < 1e-6,
          fmt("max |quadrature - closed form| %.2e, max dilation residual %.2e", worst, dilation)};
}

Outcome kernel_decay() {
  double worst = 0.0;
  for (int n : {1, 2}) {
    for (double alpha : {1.0, 2.0, 5.0}) {
      const auto fit = kernel_decay_fit(n, alpha, 10.0, 100.0);
      worst = std::max(worst, std::abs(fit.exponent - (n + alpha + 0.5)));
    }
  }
  return {worst < 0.1, fmt("max |exponent - (n + alpha + 1/2)| %.2e", worst)};
}

Outcome path_agreement() {
  const Grid grid(1, 256, 32.0);
  const auto f = gaussian(grid, 6.0, 16.0);
  const auto g = gaussian(grid, 6.0, 15.0);
  const MultiplierSpec spec{2.0, 1.0};
  const auto oracle = br_apply_oracle(f, g, spec);
  std::vector<double> errs;
  for (int nodes : {128, 256, 512}) errs.push_back(relative_l2_error(br_apply_radial(f, g, spec, nodes), oracle));
  const double kernel = relative_l2_error(br_apply_kernel(f, g, spec), oracle);
  bool halves = true;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    halves = halves && ratio > 2.0 * 0.7 && ratio < 2.0 * 1.3;
  }
  return {errs[1] < 1e-3 && kernel < 5e-2 && halves,
          fmt("radial (128/256/512 nodes) %.2e / %.2e / %.2e, kernel %.2e", errs[0], errs[1], errs[2], kernel)};
}

Outcome decomposition() {
  const auto bump = make_bump();
  double partition = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double u = std::exp2(-20.0 * i / 2000.0);
    double sum = 0.0;
    for (int j = 0; j <= 24; ++j) sum += bump(std::ldexp(u, j));
    partition = std::max(partition, std::abs(sum - 1.0));
  }
  const Grid grid(1, 256, 32.0);
  const auto f = gaussian(grid, 1.0, 16.0);
  const auto g = gaussian(grid, 1.0, 15.5);
  SampledField sum = SampledField::zeros(grid);
  for (int j = 0; j <= 12; ++j) sum = sum + t_j_apply(f, g, DyadicPiece(j, 2.0), bump);
  const double telescoping = relative_l2_error(sum, br_apply_oracle(f, g, MultiplierSpec{2.0, 1.0}));
  const DyadicPiece piece(2, 2.0);
  const double separable = relative_l2_error(br_apply_separable(f, g, piece, 512, bump), t_j_apply(f, g, piece, bump));
  return {partition < 1e-10 && telescoping < 1e-3 && separable < 1e-4,
          fmt("partition residual %.2e, telescoping %.2e, separable %.2e", partition, telescoping, separable)};
}

Outcome gamma_decay() {
  const auto report = gamma_decay_check(2.0, 0.5, 0, 8, 64, make_bump());
  return {report.log2_slope <= 0.1,
          fmt("log2 slope %.3f, empirical constant %.3f", report.log2_slope, report.constant)};
}

Outcome lemma1_scaling() {
  const Grid grid(1, 1024, 32.0);
  bool pass = true;
  std::string detail;
  const Exponent ps[] = {Exponent(1), Exponent(Rational(4, 3)), Exponent(2)};
  for (const auto& p : ps) {
    const auto report = lemma1_scaling_experiment(p, 8.0, {0.5, 1.0, 2.0, 4.0}, grid, 42);
    const double slope = report.fit->slope;
    pass = pass && std::abs(slope - report.predicted) <= 0.15;
    detail += fmt("%sp=%s slope %.3f (expected %.3f)", detail.empty() ? "" : ", ", p.str().c_str(), slope,
                  report.predicted);
  }
  return {pass, detail};
}

Outcome tj_decay() {
  const Grid grid(1, 256, 32.0);
  const auto bump = make_bump();
  const ExponentPair pair(Exponent(1), Exponent(1));
  const std::vector<int> js = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  auto epsilon = [&](double alpha) {
    const auto family = [&bump, alpha](int j) {
      return BilinearOperator([&bump, j, alpha](const SampledField& f, const SampledField& g) {
        return t_j_apply(f, g, DyadicPiece(j, alpha), bump);
      });
    };
    return decay_fit(family, pair, grid, js, 8, 42);
  };
  const auto two = epsilon(2.0);
  const auto three = epsilon(3.0);
  const bool pass = !two.degenerate && !three.degenerate && two.epsilon > 0.3 && three.epsilon >= two.epsilon - 0.1;
  return {pass, fmt("epsilon %.3f at alpha=2 (residual %.2f), %.3f at alpha=3", two.epsilon, two.residual,
                    three.epsilon)};
}

Outcome region_map() {
  auto pair = [](const char* a, const char* b) { return ExponentPair(Exponent::parse(a), Exponent::parse(b)); };
  bool pass = true;
  for (int n = 1; n <= 6; ++n) {
    const Rational N(n);
    pass = pass && smoothness_index(pair("1", "1"), n).value == N - Rational(1, 2);
    pass = pass && smoothness_index(pair("2", "2"), n).value == Rational(0);
    const auto cor = smoothness_index(pair("1", "inf"), n);
    pass = pass && cor.value == N / Rational(2) && cor.chosen.source == Source::Corollary;
    const auto mixed = smoothness_index(pair("1", "2"), n);
    pass = pass && mixed.value == N / Rational(2);
    if (n >= 2) {
      Rational region_one(-1), region_two(-1);
      for (const auto& s : mixed.sources) {
        if (s.source == Source::I_a) region_one = s.threshold.at(n);
        if (s.source == Source::II_a) region_two = s.threshold.at(n);
      }
      pass = pass && region_one == N / Rational(2) && region_two == region_one;
    }
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> den(1, 30);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = den(rng);
    std::uniform_int_distribution<int> num(0, d);
    const Rational r1(num(rng), d), r2(num(rng), d);
    const ExponentPair p(Exponent::from_reciprocal(r1), Exponent::from_reciprocal(r2));
    const ExponentPair diag(Exponent::from_reciprocal(r1), Exponent::from_reciprocal(r1));
    for (int n = 1; n <= 4; ++n) {
      pass = pass && smoothness_index(p, n).value == smoothness_index(p.swapped(), n).value;
      // On the diagonal the two halves of region II meet; their thresholds must agree.
      const auto d_result = smoothness_index(diag, n);
      Rational a(-1), b(-1);
      for (const auto& s : d_result.sources) {
        if (s.source == Source::II_a) a = s.threshold.at(n);
        if (s.source == Source::II_b) b = s.threshold.at(n);
      }
      pass = pass && a == b;
      ++checked;
    }
  }
  return {pass, fmt("fixed pairs for n=1..6, %d symmetry and diagonal checks", checked)};
}

Outcome envelope() {
  const auto samples = radial_samples(1, 40.0, 41, 7);
  const auto reports = envelope_fit(2.0, {0, 1, 2, 3, 4, 5, 6}, std::vector<double>{2.0, 3.0}, samples, make_bump());
  bool pass = true;
  std::string detail;
  for (const auto& r : reports) {
    pass = pass && r.log2_slope <= 0.1;
    detail += fmt("%sM=%g slope %.3f (C_0 %.3f, C_6 %.3f)", detail.empty() ? "" : ", ", r.power, r.log2_slope,
                  r.constants.front(), r.constants.back());
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "Bessel cross-validation", 10, bessel_cross_validation},
      {2, "kernel identity", 120, kernel_identity},
      {3, "kernel decay", 60, kernel_decay},
      {4, "path agreement", 120, path_agreement},
      {5, "decomposition", 180, decomposition},
      {6, "gamma decay", 120, gamma_decay},
      {7, "band operator scaling", 120, lemma1_scaling},
      {8, "piece decay", 300, tj_decay},
      {9, "region map exactness", 1, region_map},
      {10, "kernel envelope", 180, envelope},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && seconds < c.budget_seconds;
    failures += !pass;
    std::printf("criterion %2d %-26s %s  %s [%.2f s / %.0f s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                out.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
