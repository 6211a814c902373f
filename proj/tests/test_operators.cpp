#include <doctest.h>

#include <cmath>
#include <numbers>

#include "brlab/bessel.hpp"
#include "brlab/errors.hpp"
#include "brlab/operators.hpp"

using namespace brlab;

namespace {

SampledField gaussian(const Grid& grid, double width, double c) {
  FieldParams p;
  p.center = Eigen::Vector2d::Constant(c);
  p.width = width;
  return make_test_field(FieldKind::gaussian, p, grid, 0);
}

SampledField random_band(const Grid& grid, double lo, double hi, std::uint64_t seed) {
  FieldParams p;
  p.band_lo = lo;
  p.band_hi = hi;
  return make_test_field(FieldKind::band_limited_random, p, grid, seed);
}

SampledField delta(const Grid& grid) {
  Eigen::ArrayXcd v = Eigen::ArrayXcd::Zero(grid.size());
  v(0) = 1.0 / grid.cell_measure();
  return {grid, v};
}

double max_abs(const SampledField& f) { return f.values().abs().maxCoeff(); }

}  // namespace

TEST_CASE("multiplier symbol") {
  const MultiplierSpec ball{0.0, 1.0};
  CHECK(ball(0.6, 0.8) == 1.0);
  CHECK(ball(0.6, 0.81) == 0.0);
  const MultiplierSpec smooth{2.0, 2.0};
  CHECK(smooth(1.0, 1.0) == doctest::Approx(0.25));
  CHECK(smooth(2.0, 0.0) == 0.0);
  CHECK_THROWS_AS((MultiplierSpec{-1.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((MultiplierSpec{1.0, 0.0}.validate()), ValidationError);
}

TEST_CASE("restriction of a delta is the sphere transform") {
  const Grid grid(1, 128, 16.0);
  const double lambda = 0.75;
  const auto r = restriction(delta(grid), lambda, grid.frequency_spacing());
  CHECK_FALSE(r.empty_annulus);
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double x = grid.spacing() * k;
    CHECK(std::abs(r.density[k] - sphere_ft_radial(lambda, x, 1)) < 1e-12);
  }

  // n = 2: at the origin the density counts lattice points of the annulus.
  const Grid plane(2, 128, 32.0);
  const auto r2 = restriction(delta(plane), 1.0, 4.0 / 32.0);
  CHECK(r2.density[0].real() == doctest::Approx(sphere_ft_radial(1.0, 0.0, 2)).epsilon(0.1));
}

TEST_CASE("restriction edge cases") {
  const Grid grid(1, 64, 8.0);
  const auto f = gaussian(grid, 1.0, 4.0);
  const auto empty = restriction(f, 5.0, 0.125);
  CHECK(empty.empty_annulus);
  CHECK(max_abs(empty.density) == 0.0);
  CHECK_THROWS_AS(restriction(f, 1.0, 0.01), ValidationError);
  CHECK_THROWS_AS(restriction(f, 0.0, 1.0), ValidationError);
  const auto g = random_band(grid, 0.0, 2.0, 4);
  const Complex a(2.0, -0.5);
  const auto lhs = restriction(a * f + g, 1.0, 0.25).density;
  const auto rhs = a * restriction(f, 1.0, 0.25).density + restriction(g, 1.0, 0.25).density;
  CHECK(relative_l2_error(lhs, rhs) < 1e-13);
}

TEST_CASE("band operator") {
  const Grid grid(2, 64, 16.0);
  const auto f = random_band(grid, 0.0, 1.8, 2);
  const auto identity = band_operator(f, BandSpec{0.0, 10.0});
  CHECK(relative_l2_error(identity, f) < 1e-13);
  const auto zero = band_operator(f, BandSpec{0.0, 10.0, [](double) { return Complex(0.0); }});
  CHECK(max_abs(zero) == 0.0);

  const BandSpec smooth{0.5, 1.5, [](double s) { return Complex(0.7 * std::cos(3 * s), 0.2); }};
  const auto tf = band_operator(f, smooth);
  CHECK(lp_norm(tf, Exponent(2)) <= std::hypot(0.7, 0.2) * lp_norm(f, Exponent(2)) + 1e-12);

  const BandSpec unit{0.5, 1.5};
  CHECK(relative_l2_error(band_operator_quadrature(f, unit, 16), band_operator(f, unit)) < 1e-12);
  double prev = 1.0;
  for (int nodes : {16, 32, 64}) {
    const double err = relative_l2_error(band_operator_quadrature(f, smooth, nodes), tf);
    CHECK(err < prev);
    prev = err;
  }
  CHECK_THROWS_AS((BandSpec{1.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS(band_operator_quadrature(f, unit, 0), ValidationError);
}

TEST_CASE("band operator norm scales like the square root of the band width") {
  const Grid grid(2, 256, 32.0);
  const auto f = gaussian(grid, 0.125, 16.0);
  const auto norm = [&](double w) { return lp_norm(band_operator(f, BandSpec{3.0 - w, 3.0}), Exponent(2)); };
  CHECK(norm(1.0) / norm(0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
  CHECK(norm(0.5) / norm(0.25) == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
}

TEST_CASE("oracle reduces to the product for alpha = 0 and low frequencies") {
  const Grid grid(2, 32, 16.0);
  const auto f = random_band(grid, 0.0, 0.3, 1);
  const auto g = random_band(grid, 0.0, 0.3, 2);
  const auto out = br_apply_oracle(f, g, MultiplierSpec{0.0, 1.0});
  CHECK(relative_l2_error(out, f * g) < 1e-12);
  CHECK(relative_l2_error(br_apply_radial(f, g, MultiplierSpec{0.0, 1.0}), f * g) < 1e-12);
}

TEST_CASE("all paths are symmetric, bilinear and vanish on zero") {
  const Grid grid(1, 64, 16.0);
  const auto f = gaussian(grid, 2.0, 8.0);
  const auto g = random_band(grid, 0.0, 1.5, 3);
  const auto h = gaussian(grid, 1.0, 3.0);
  const MultiplierSpec spec{1.5, 1.0};
  const auto zero = SampledField::zeros(grid);
  using Path = SampledField (*)(const SampledField&, const SampledField&, const MultiplierSpec&);
  const Path paths[] = {
      [](const SampledField& a, const SampledField& b, const MultiplierSpec& s) { return br_apply_oracle(a, b, s); },
      [](const SampledField& a, const SampledField& b, const MultiplierSpec& s) { return br_apply_radial(a, b, s); },
      [](const SampledField& a, const SampledField& b, const MultiplierSpec& s) { return br_apply_radial(a, b, s, 64); },
      [](const SampledField& a, const SampledField& b, const MultiplierSpec& s) { return br_apply_kernel(a, b, s); },
  };
  for (const auto& path : paths) {
    const auto fg = path(f, g, spec);
    CHECK(relative_l2_error(path(g, f, spec), fg) < 1e-12);
    CHECK(max_abs(path(zero, g, spec)) == 0.0);
    const Complex a(0.5, 1.0);
    CHECK(relative_l2_error(path(a * f + h, g, spec), a * fg + path(h, g, spec)) < 1e-12);
  }
}

TEST_CASE("output spectrum lies in the ball of radius 2R") {
  const Grid grid(1, 128, 16.0);
  const auto f = random_band(grid, 0.0, 3.5, 6);
  const auto g = random_band(grid, 0.0, 3.5, 7);
  const auto spectrum = dft_forward(br_apply_oracle(f, g, MultiplierSpec{1.0, 1.25}));
  const auto radii = grid.frequency_radii();
  for (Eigen::Index b = 0; b < grid.size(); ++b) {
    if (radii(b) > 2.5 + 1e-12) CHECK(std::abs(spectrum[b]) < 1e-12);
  }
}

TEST_CASE("dilation in R matches dilation of the grid") {
  const Grid small(1, 64, 8.0);
  const Grid large(1, 64, 16.0);
  const auto f = random_band(small, 0.0, 2.0, 8);
  const auto g = gaussian(small, 1.0, 4.0);
  const SampledField f_large(large, f.values());
  const SampledField g_large(large, g.values());
  const auto oracle_r2 = br_apply_oracle(f, g, MultiplierSpec{1.0, 2.0});
  const auto oracle_r1 = br_apply_oracle(f_large, g_large, MultiplierSpec{1.0, 1.0});
  CHECK((oracle_r2.values() - oracle_r1.values()).abs().maxCoeff() < 1e-12 * max_abs(oracle_r2));
  const auto radial_r2 = br_apply_radial(f, g, MultiplierSpec{1.0, 2.0});
  const auto radial_r1 = br_apply_radial(f_large, g_large, MultiplierSpec{1.0, 1.0});
  CHECK((radial_r2.values() - radial_r1.values()).abs().maxCoeff() < 1e-12 * max_abs(radial_r2));
}

TEST_CASE("radial path converges to the oracle") {
  const Grid grid(1, 256, 32.0);
  const auto f = gaussian(grid, 6.0, 16.0);
  const auto g = gaussian(grid, 6.0, 15.0);
  const MultiplierSpec spec{1.0, 1.0};
  const auto oracle = br_apply_oracle(f, g, spec);
  CHECK(relative_l2_error(br_apply_radial(f, g, spec), oracle) < 1e-12);
  double prev = 1.0;
  for (int nodes : {64, 128, 256, 512}) {
    const double err = relative_l2_error(br_apply_radial(f, g, spec, nodes), oracle);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(br_apply_radial(f, g, spec, -1), ValidationError);
}

TEST_CASE("kernel path matches the oracle for smooth symbols") {
  const Grid grid(1, 128, 32.0);
  const auto f = gaussian(grid, 6.0, 16.0);
  const auto g = gaussian(grid, 6.0, 15.0);
  const MultiplierSpec spec{3.0, 1.0};
  CHECK(relative_l2_error(br_apply_kernel(f, g, spec), br_apply_oracle(f, g, spec)) < 1e-6);
}

TEST_CASE("budget cap") {
  const Grid grid(2, 64, 8.0);
  const auto f = gaussian(grid, 1.0, 4.0);
  CHECK_THROWS_AS(br_apply_oracle(f, f, MultiplierSpec{}, OperationBudget{1000}), BudgetError);
  CHECK_THROWS_AS(br_apply_kernel(f, f, MultiplierSpec{}, OperationBudget{1000}), BudgetError);
  CHECK_THROWS_AS(br_apply_oracle(f, gaussian(Grid(2, 64, 9.0), 1.0, 4.0), MultiplierSpec{}), ValidationError);
}
