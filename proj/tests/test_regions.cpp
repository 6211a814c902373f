#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "brlab/errors.hpp"
#include "brlab/regions.hpp"

using namespace brlab;

namespace {

ExponentPair pair(const char* a, const char* b) { return {Exponent::parse(a), Exponent::parse(b)}; }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classification") {
  CHECK(classify(pair("4/3", "2")) == RegionLabel::I_a);
  CHECK(classify(pair("1", "4")) == RegionLabel::I_a);
  CHECK(classify(pair("4", "1")) == RegionLabel::I_b);
  CHECK(classify(pair("1", "1")) == RegionLabel::II_a);
  CHECK(classify(pair("2", "2")) == RegionLabel::II_a);
  CHECK(classify(pair("2", "4/3")) == RegionLabel::I_b);
  CHECK(classify(pair("4/3", "8/5")) == RegionLabel::II_a);
  CHECK(classify(pair("8/5", "4/3")) == RegionLabel::II_b);
  CHECK(classify(pair("inf", "inf")) == RegionLabel::Banach_fallback);
  CHECK(classify(pair("1", "inf")) == RegionLabel::Banach_fallback);
}

TEST_CASE("smoothness thresholds") {
  const auto a = smoothness_index(pair("4/3", "2"), 2);
  CHECK(a.label == RegionLabel::I_a);
  CHECK(a.chosen.source == Source::I_a);
  CHECK(a.chosen.threshold.str() == "1/4*n");
  CHECK(a.value == Rational(1, 2));

  const auto b = smoothness_index(pair("1", "1"), 2);
  CHECK(b.chosen.source == Source::II_a);
  CHECK(b.chosen.threshold.str() == "1*n - 1/2");
  CHECK(b.value == Rational(3, 2));

  const auto c = smoothness_index(pair("2", "2"), 3);
  CHECK(c.value == Rational(0));
  CHECK(c.chosen.threshold.str() == "0");

  const auto d = smoothness_index(pair("1", "inf"), 1);
  CHECK(d.chosen.source == Source::Corollary);
  CHECK(d.value == Rational(1, 2));

  const auto e = smoothness_index(pair("inf", "inf"), 4);
  CHECK(e.sources.size() == 1);
  CHECK(e.chosen.source == Source::Basic);
  CHECK(e.value == Rational(7, 2));

  const auto g = smoothness_index(pair("1", "2"), 3);
  CHECK(g.value == Rational(3, 2));
  Rational one(-1), two(-1);
  for (const auto& s : g.sources) {
    if (s.source == Source::I_a) one = s.threshold.at(3);
    if (s.source == Source::II_a) two = s.threshold.at(3);
  }
  CHECK(one == Rational(3, 2));
  CHECK(two == one);

  // The two-region thresholds need n >= 2.
  const auto f = smoothness_index(pair("4/3", "2"), 1);
  for (const auto& s : f.sources) CHECK(s.source != Source::I_a);
  CHECK_THROWS_AS(smoothness_index(pair("1", "1"), 0), DomainError);
}

TEST_CASE("thresholds are symmetric and attain the minimum") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(0, 24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r1 = Rational(num(rng), 24);
    const auto r2 = Rational(num(rng), 24);
    const ExponentPair p(Exponent::from_reciprocal(r1), Exponent::from_reciprocal(r2));
    for (int n : {1, 2, 3}) {
      const auto a = smoothness_index(p, n);
      const auto b = smoothness_index(p.swapped(), n);
      CHECK(a.value == b.value);
      for (const auto& s : a.sources) CHECK(a.value <= s.threshold.at(n));
      CHECK(a.value <= Rational(n) - Rational(1, 2));
      CHECK(a.value >= Rational(0));
      const auto d = smoothness_index(ExponentPair(Exponent::from_reciprocal(r1), Exponent::from_reciprocal(r1)), n);
      Rational lower(-1), upper(-2);
      for (const auto& s : d.sources) {
        if (s.source == Source::II_a) lower = s.threshold.at(n);
        if (s.source == Source::II_b) upper = s.threshold.at(n);
      }
      if (r1 >= Rational(1, 2) && n >= 2) CHECK(lower == upper);
    }
  }
}

TEST_CASE("region map export") {
  const auto dir = std::filesystem::temp_directory_path() / "brlab_regions_test";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "regions.csv";
  const auto svg = dir / "regions.svg";
  region_grid_export(2, 16, csv.string(), svg.string(), "test");
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "inv_p1,inv_p2,label,threshold,threshold_exact");
  int rows = 0;
  bool saw_corner = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("1,1,", 0) == 0) {
      CHECK(line == "1,1,II_a,1.5,1*n - 1/2");
      saw_corner = true;
    }
  }
  CHECK(rows == 17 * 17);
  CHECK(saw_corner);

  const auto text = slurp(svg);
  std::size_t boundaries = 0;
  for (auto pos = text.find("class=\"boundary\""); pos != std::string::npos;
       pos = text.find("class=\"boundary\"", pos + 1)) {
    ++boundaries;
  }
  CHECK(boundaries == 4);
  CHECK(text.find("width=\"800\"") != std::string::npos);
  CHECK(text.find("<!-- test -->") != std::string::npos);

  CHECK_THROWS_AS(region_grid_export(2, 8, csv.string(), svg.string()), ValidationError);
  CHECK_THROWS_AS(region_grid_export(2, 16, (dir / "missing/r.csv").string(), svg.string()), IoError);
  std::filesystem::remove_all(dir);
}
