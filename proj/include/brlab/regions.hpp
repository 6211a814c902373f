#pragma once

#include <string>
#include <vector>

#include "brlab/rational.hpp"

namespace brlab {

/// I_a: 1 <= p₁ <= 2 <= p₂, p < 1.   I_b: 1 <= p₂ <= 2 <= p₁, p < 1.
/// II_a: 1 <= p₁ <= p₂ <= 2.          II_b: 1 <= p₂ <= p₁ <= 2.
/// Banach_fallback: everything else (p >= 1 outside region II).
/// Basic labels the n - 1/2 estimate valid for every pair.
enum class RegionLabel { I_a, I_b, II_a, II_b, Banach_fallback, Basic };

/// Statement a threshold comes from. The region labels double as the
/// sources of the two-region theorem.
enum class Source { I_a, I_b, II_a, II_b, TheoremTwo, Corollary, Basic };

std::string to_string(RegionLabel label);
std::string to_string(Source source);

/// The exact affine threshold c_n·n + c_0.
struct Threshold {
  Rational c_n;
  Rational c_0;

  Rational at(int n) const { return c_n * Rational(n) + c_0; }
  /// "1/4*n", "1*n - 1/2", "0", ...
  std::string str() const;
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

struct IndexSource {
  Source source;
  Threshold threshold;
};

struct IndexResult {
  RegionLabel label;
  std::vector<IndexSource> sources;  ///< every applicable statement, in fixed order
  IndexSource chosen;                ///< first source attaining the minimum at n
  Rational value;                    ///< chosen.threshold.at(n)
};

/// Region of (p₁, p₂), ties resolved in the order I_a, I_b, II_a, II_b.
RegionLabel classify(const ExponentPair& exponents);

/// All applicable smoothness thresholds at dimension n and their minimum.
/// The two-region entries need n >= 2; the others n >= 1.
IndexResult smoothness_index(const ExponentPair& exponents, int n);

/// Writes the region map over the (1/p₁, 1/p₂) square: a CSV with one row per
/// node (i/res, k/res), i, k = 0..res, and an 800×800 SVG.
void region_grid_export(int n, int resolution, const std::string& csv_path, const std::string& svg_path,
                        const std::string& version_comment = "");

}  // namespace brlab
