#include <doctest.h>

#include <cmath>
#include <numbers>
#include <Eigen/Geometry>
#include <random>

#include "brlab/bessel.hpp"

using namespace brlab;

namespace {

struct Reference {
  double k, r, value;
};

// 20-digit reference values computed with an arbitrary-precision library.
constexpr Reference kReference[] = {
    {0, 0.5, 0.93846980724081290423},     {0, 12.5, 0.14688405470042110231},
    {0, 100, 0.019985850304223122424},    {0, 1e4, -0.0070961603533888014773},
    {0.5, 3, 0.065008182877375778114},    {1, 7.3, 0.082570430493257831051},
    {1, 250, -0.043269038410330749511},   {1.5, 5, -0.16965130614474076152},
    {2, 100, -0.021528757344505365585},   {2.5, 40, -0.08751431140932354553},
    {3, 11.9, 0.20762727605698189417},    {3, 12.1, 0.18092987885069796201},
    {4, 0.01, 2.604153645860460254e-11},  {5, 30, -0.14324029551207707699},
    {7, 13, -0.24057094958616050699},     {7, 2500, 0.015896818210832339947},
    {9.5, 20, 0.18156755992535613066},    {12, 30, 0.14825335109966010021},
    {0.25, 0.7, 0.76766028646855313457},  {0.75, 60, 0.0082684278148276085687},
    {-0.25, 2, 0.0035869156241729160775},
};

}  // namespace

TEST_CASE("J_k matches high-precision reference values") {
  for (const auto& ref : kReference) {
    CAPTURE(ref.k);
    CAPTURE(ref.r);
    const double got = bessel_j(BesselOrder(ref.k), ref.r);
    CHECK(std::abs(got - ref.value) <= 1e-12 + 1e-10 * std::abs(ref.value));
  }
}

TEST_CASE("known values") {
  CHECK(bessel_j(BesselOrder(0), 0.0) == 1.0);
  CHECK(bessel_j(BesselOrder(1), 0.0) == 0.0);
  CHECK(bessel_j(BesselOrder(0), 2.404825557695773) == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(bessel_j(BesselOrder(0.5), std::numbers::pi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(bessel_j(BesselOrder(0.5), 1.0) == doctest::Approx(0.67139670714180309).epsilon(1e-13));
}

TEST_CASE("half-integer order agrees with its closed form") {
  for (double r = 0.01; r <= 200.0; r *= 1.3) {
    const double exact = std::sqrt(2.0 / (std::numbers::pi * r)) * std::sin(r);
    CHECK(std::abs(bessel_j(BesselOrder(0.5), r) - exact) <= 1e-12);
  }
}

TEST_CASE("series and oracle agree on the reliable range") {
  for (double k : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) {
    for (double r = 0.01; r <= kOracleReliableArgument; r *= 1.25) {
      const auto oracle = bessel_j_oracle(BesselOrder(k), r);
      CHECK_FALSE(oracle.accuracy_warning);
      CHECK(std::abs(bessel_j(BesselOrder(k), r) - oracle.value) <= 1e-10);
    }
  }
  CHECK(bessel_j_oracle(BesselOrder(1), 500.0).accuracy_warning);
}

TEST_CASE("sqrt(r) |J_k(r)| stays bounded") {
  for (double k : {0.0, 1.0, 2.5}) {
    double worst = 0.0;
    for (double r = 1.0; r <= 1e4; r *= 1.01) worst = std::max(worst, std::sqrt(r) * std::abs(bessel_j(BesselOrder(k), r)));
    CHECK(worst < std::sqrt(2.0 / std::numbers::pi) + 0.1);
  }
}

TEST_CASE("order domain") {
  CHECK_THROWS_AS(BesselOrder(-0.5), DomainError);
  CHECK_THROWS_AS(BesselOrder(-1.0), DomainError);
  CHECK_THROWS_AS(BesselOrder(std::nan("")), DomainError);
  CHECK_THROWS_AS(bessel_j(BesselOrder(1), -1.0), DomainError);
}

TEST_CASE("sphere Fourier transform") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_ft_radial(1.0, 0.0, 2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_ft_radial(1.0, 0.0, 3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_ft_radial(0.75, 0.4, 1) == doctest::Approx(2 * std::cos(2 * std::numbers::pi * 0.3)));
  // n = 2: 2π J_0(2π|x|).
  CHECK(sphere_ft_radial(1.0, 0.5, 2) ==
        doctest::Approx(2 * std::numbers::pi * bessel_j(BesselOrder(0), std::numbers::pi)).epsilon(1e-13));
  // Dilation: φ_λ(x) = φ_1(λx).
  CHECK(sphere_ft_radial(2.5, 0.3, 2) == doctest::Approx(sphere_ft_radial(1.0, 0.75, 2)).epsilon(1e-14));
  CHECK_THROWS_AS(sphere_ft_radial(0.0, 1.0, 2), DomainError);
}

TEST_CASE("sphere Fourier transform is radial") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  const Eigen::Vector2d x(0.8, -1.3);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector2d y = Eigen::Rotation2Dd(angle(rng)) * x;
    CHECK(sphere_ft(1.7, y) == doctest::Approx(sphere_ft(1.7, x)).epsilon(1e-13));
  }
}
