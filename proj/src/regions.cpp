#include "brlab/regions.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

const Rational kHalf(1, 2);
const Rational kOne(1);
const Rational kTwo(2);

bool in_region_two(const Rational& r1, const Rational& r2) {
  // 1 <= p <= 2 means 1/2 <= 1/p <= 1; reciprocals are already <= 1.
  return r1 >= kHalf && r2 >= kHalf;
}

const char* fill_for(RegionLabel label) {
  switch (label) {
    case RegionLabel::I_a: return "#4e79a7";
    case RegionLabel::I_b: return "#a0cbe8";
    case RegionLabel::II_a: return "#f28e2b";
    case RegionLabel::II_b: return "#ffbe7d";
    case RegionLabel::Banach_fallback: return "#d4d4d4";
    case RegionLabel::Basic: return "#59a14f";
  }
  return "#ffffff";
}

}  // namespace

std::string to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::I_a: return "I_a";
    case RegionLabel::I_b: return "I_b";
    case RegionLabel::II_a: return "II_a";
    case RegionLabel::II_b: return "II_b";
    case RegionLabel::Banach_fallback: return "Banach_fallback";
    case RegionLabel::Basic: return "Basic";
  }
  return "unknown";
}

std::string to_string(Source source) {
  switch (source) {
    case Source::I_a: return "I_a";
    case Source::I_b: return "I_b";
    case Source::II_a: return "II_a";
    case Source::II_b: return "II_b";
    case Source::TheoremTwo: return "TheoremTwo";
    case Source::Corollary: return "Corollary";
    case Source::Basic: return "Basic";
  }
  return "unknown";
}

std::string Threshold::str() const {
  if (c_n.is_zero()) return c_0.str();
  std::string out = c_n.str() + "*n";
  if (c_0.sign() > 0) out += " + " + c_0.str();
  if (c_0.sign() < 0) out += " - " + (-c_0).str();
  return out;
}

RegionLabel classify(const ExponentPair& exponents) {
  const Rational r1 = exponents.p1().reciprocal();
  const Rational r2 = exponents.p2().reciprocal();
  const bool non_banach = r1 + r2 > kOne;
  if (non_banach && r1 >= kHalf && r2 <= kHalf) return RegionLabel::I_a;
  if (non_banach && r2 >= kHalf && r1 <= kHalf) return RegionLabel::I_b;
  if (in_region_two(r1, r2) && r1 >= r2) return RegionLabel::II_a;
  if (in_region_two(r1, r2) && r2 >= r1) return RegionLabel::II_b;
  return RegionLabel::Banach_fallback;
}

IndexResult smoothness_index(const ExponentPair& exponents, int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  const Rational r1 = exponents.p1().reciprocal();
  const Rational r2 = exponents.p2().reciprocal();
  const Rational rp = r1 + r2;
  const bool non_banach = rp > kOne;

  std::vector<IndexSource> sources;
  if (n >= 2) {
    if (non_banach && r1 >= kHalf && r2 <= kHalf) sources.push_back({Source::I_a, {r1 - kHalf, Rational(0)}});
    if (non_banach && r2 >= kHalf && r1 <= kHalf) sources.push_back({Source::I_b, {r2 - kHalf, Rational(0)}});
    if (in_region_two(r1, r2) && r1 >= r2) sources.push_back({Source::II_a, {rp - kOne, -(r2 - kHalf)}});
    if (in_region_two(r1, r2) && r2 >= r1) sources.push_back({Source::II_b, {rp - kOne, -(r1 - kHalf)}});
  }
  if (in_region_two(r1, r2)) sources.push_back({Source::TheoremTwo, {rp - kOne, Rational(0)}});
  if ((r1 == kOne && r2.is_zero()) || (r1.is_zero() && r2 == kOne)) {
    sources.push_back({Source::Corollary, {kHalf, Rational(0)}});
  }
  sources.push_back({Source::Basic, {kOne, -kHalf}});

  IndexSource chosen = sources.front();
  for (const auto& s : sources) {
    if (s.threshold.at(n) < chosen.threshold.at(n)) chosen = s;
  }
  return {classify(exponents), std::move(sources), chosen, chosen.threshold.at(n)};
}

void region_grid_export(int n, int resolution, const std::string& csv_path, const std::string& svg_path,
                        const std::string& version_comment) {
  if (resolution < 16) throw ValidationError("resolution", "resolution must be >= 16");
  if (n < 1) throw ValidationError("n", "dimension must be >= 1");

  std::ofstream csv(csv_path);
  if (!csv) throw IoError(csv_path, "cannot open for writing");
  csv << "inv_p1,inv_p2,label,threshold,threshold_exact\n";

  // SVG: plot square [60, 680] x [40, 660]; legend below.
  constexpr double x0 = 60.0, y0 = 40.0, side = 620.0;
  std::ostringstream cells;
  const double cell = side / (resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    for (int k = 0; k <= resolution; ++k) {
      const Rational a(i, resolution);
      const Rational b(k, resolution);
      const ExponentPair pair(Exponent::from_reciprocal(a), Exponent::from_reciprocal(b));
      const IndexResult r = smoothness_index(pair, n);
      csv << a.str() << ',' << b.str() << ',' << to_string(r.label) << ',' << std::setprecision(17)
          << r.value.to_double() << ',' << r.chosen.threshold.str() << '\n';
      cells << "<rect x=\"" << x0 + i * cell << "\" y=\"" << y0 + (resolution - k) * cell << "\" width=\"" << cell
            << "\" height=\"" << cell << "\" fill=\"" << fill_for(r.label) << "\"/>\n";
    }
  }
  if (!csv) throw IoError(csv_path, "write failed");

  std::ofstream svg(svg_path);
  if (!svg) throw IoError(svg_path, "cannot open for writing");
  auto px = [&](double u) { return x0 + u * side; };
  auto py = [&](double v) { return y0 + (1.0 - v) * side; };
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  if (!version_comment.empty()) svg << "<!-- " << version_comment << " -->\n";
  svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n" << cells.str();
  svg << "<g stroke=\"black\" stroke-width=\"2\">\n";
  svg << "<line class=\"boundary\" x1=\"" << px(0.5) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0.5) << "\" y2=\""
      << py(1) << "\"/>\n";
  svg << "<line class=\"boundary\" x1=\"" << px(0) << "\" y1=\"" << py(0.5) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(0.5) << "\"/>\n";
  svg << "<line class=\"boundary\" x1=\"" << px(0) << "\" y1=\"" << py(1) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(0) << "\"/>\n";
  svg << "<line class=\"boundary\" x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(1) << "\"/>\n";
  svg << "</g>\n";
  svg << "<text x=\"" << px(0.5) << "\" y=\"" << py(0) + 30 << "\" text-anchor=\"middle\" font-size=\"16\">1/p1</text>\n";
  svg << "<text x=\"20\" y=\"" << py(0.5) << "\" font-size=\"16\" transform=\"rotate(-90 20 " << py(0.5)
      << ")\" text-anchor=\"middle\">1/p2</text>\n";
  svg << "<g id=\"legend\" font-size=\"14\">\n";
  const RegionLabel shown[] = {RegionLabel::I_a, RegionLabel::I_b, RegionLabel::II_a, RegionLabel::II_b,
                               RegionLabel::Banach_fallback};
  for (int i = 0; i < 5; ++i) {
    const double lx = 60.0 + 140.0 * i;
    svg << "<rect x=\"" << lx << "\" y=\"720\" width=\"18\" height=\"18\" fill=\"" << fill_for(shown[i])
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << lx + 24 << "\" y=\"734\">" << to_string(shown[i]) << "</text>\n";
  }
  svg << "<text x=\"60\" y=\"770\">n = " << n << ", resolution " << resolution << "</text>\n";
  svg << "</g>\n</svg>\n";
  if (!svg) throw IoError(svg_path, "write failed");
}

}  // namespace brlab
