#include <doctest.h>

#include <cmath>
#include <numbers>

#include "brlab/decomposition.hpp"
#include "brlab/errors.hpp"

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

}  // namespace

TEST_CASE("bump values and support") {
  const auto bump = make_bump();
  CHECK(bump(1.0) == doctest::Approx(1.0));
  CHECK(bump(0.5) == 0.0);
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(0.4) == 0.0);
  CHECK(bump(3.0) == 0.0);
  CHECK(bump(0.7) > 0.0);
  CHECK(BumpFunction::profile(1.25) > BumpFunction::profile(0.6));
}

TEST_CASE("dyadic partition of unity") {
  const auto bump = make_bump();
  double worst = 0.0;
  for (double s = 0.01; s < 100.0; s *= 1.037) {
    double sum = 0.0;
    for (int j = -12; j <= 12; ++j) sum += bump(std::ldexp(s, j));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("slices of the multiplier") {
  const auto bump = make_bump();
  CHECK_THROWS_AS(DyadicPiece(-1, 1.0), ValidationError);
  CHECK_THROWS_AS(DyadicPiece(0, 0.0), ValidationError);
  CHECK(phi_j_alpha(0.8, 0.7, DyadicPiece(0, 1.0), bump) == 0.0);
  CHECK(phi_j_alpha(0.0, 0.0, DyadicPiece(0, 2.0), bump) == doctest::Approx(1.0));
  for (double alpha : {0.5, 1.0, 3.0}) {
    double sum = 0.0;
    for (int j = 0; j <= 20; ++j) sum += phi_j_alpha(0.6, 0.5, DyadicPiece(j, alpha), bump);
    CHECK(sum == doctest::Approx(std::pow(0.39, alpha)).epsilon(1e-13));
  }
}

TEST_CASE("pieces telescope to the full operator") {
  const Grid grid(1, 128, 16.0);
  const auto f = gaussian(grid, 1.0, 8.0);
  const auto g = gaussian(grid, 1.0, 7.5);
  const auto bump = make_bump();
  const auto full = br_apply_oracle(f, g, MultiplierSpec{1.0, 1.0});
  SampledField sum = SampledField::zeros(grid);
  for (int j = 0; j <= 12; ++j) sum = sum + t_j_apply(f, g, DyadicPiece(j, 1.0), bump);
  CHECK(relative_l2_error(sum, full) < 1e-3);
}

TEST_CASE("pieces are bilinear and vanish off the unit ball") {
  const Grid grid(1, 64, 16.0);
  const auto bump = make_bump();
  const DyadicPiece piece(1, 2.0);
  const auto f = random_band(grid, 0.0, 1.0, 1);
  const auto g = random_band(grid, 0.0, 1.0, 2);
  const auto h = gaussian(grid, 2.0, 5.0);
  const auto lhs = t_j_apply(Complex(3.0) * f + h, g, piece, bump);
  const auto rhs = Complex(3.0) * t_j_apply(f, g, piece, bump) + t_j_apply(h, g, piece, bump);
  CHECK(relative_l2_error(lhs, rhs) < 1e-13);
  const auto high = random_band(grid, 1.1, 1.9, 3);
  CHECK(t_j_apply(high, g, piece, bump).values().abs().maxCoeff() < 1e-15);
}

TEST_CASE("gamma coefficients") {
  const auto bump = make_bump();
  const DyadicPiece piece(1, 2.0);
  for (double s : {0.0, 0.3, 0.7}) CHECK(gamma_coeff(piece, 0, s, bump) >= 0.0);
  CHECK(gamma_coeff(piece, 3, 0.3, bump) == doctest::Approx(gamma_coeff(piece, -3, 0.3, bump)));
  CHECK_THROWS_AS(gamma_coeff(piece, 0, 1.5, bump), DomainError);

  // The Fourier series in t reproduces the slice.
  const GammaTable table(piece, 512, {0.3}, bump);
  for (double t : {-0.5, 0.0, 0.5, 0.9}) {
    double sum = table(0, 0);
    for (int k = 1; k <= 512; ++k) sum += 2.0 * table(k, 0) * std::cos(std::numbers::pi * k * t);
    CHECK(sum == doctest::Approx(phi_j_alpha(0.3, std::abs(t), piece, bump)).scale(1.0).epsilon(1e-6));
  }

  const std::vector<double> s = {0.0, 0.2, 0.5, 0.8, 0.95};
  const GammaTable multi(DyadicPiece(3, 1.5), 32, s, bump);
  for (int k : {0, 1, 7, 32}) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(multi(k, i) == doctest::Approx(gamma_coeff(DyadicPiece(3, 1.5), k, s[i], bump)).scale(1e-3).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(multi.sup_abs(33), DomainError);
}

TEST_CASE("gamma decay constant stays bounded") {
  const auto report = gamma_decay_check(2.0, 0.5, 0, 8, 64, make_bump());
  CHECK(report.rows.size() == 9 * 129);
  CHECK_FALSE(report.growth_flag);
  CHECK(report.constant < 10.0);
  CHECK(report.log2_slope < 0.1);
  CHECK_THROWS_AS(gamma_decay_check(1.0, 1.0, 0, 4, 8, make_bump()), DomainError);
  CHECK_THROWS_AS(gamma_decay_check(1.0, 0.5, 3, 2, 8, make_bump()), DomainError);
}

TEST_CASE("separable expansion converges to the piece") {
  const Grid grid(1, 128, 16.0);
  const auto f = gaussian(grid, 1.0, 8.0);
  const auto g = gaussian(grid, 1.0, 7.5);
  const auto bump = make_bump();
  const DyadicPiece piece(2, 2.0);
  const auto exact = t_j_apply(f, g, piece, bump);
  double prev = 1.0;
  for (int k : {32, 128, 512}) {
    const double err = relative_l2_error(br_apply_separable(f, g, piece, k, bump), exact);
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
  CHECK(br_apply_separable(SampledField::zeros(grid), g, piece, 16, bump).values().abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(br_apply_separable(f, g, piece, 0, bump), ValidationError);
}
