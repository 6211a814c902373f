#include "brlab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "brlab/errors.hpp"
#include "brlab/operators.hpp"

namespace brlab {
namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Eigen::Vector2d grid_center(const Grid& grid) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (int a = 0; a < grid.dim(); ++a) c(a) = grid.side() / 2;
  return c;
}

Eigen::Vector2d axis_frequency(double value) { return {value, 0.0}; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

SampledField random_field(const Grid& grid, double lo, double hi, std::uint64_t seed) {
  FieldParams params;
  params.center = grid_center(grid);
  params.band_lo = lo;
  params.band_hi = std::min(hi, grid.nyquist());
  return make_test_field(FieldKind::band_limited_random, params, grid, seed);
}

// e^{iπ θ} with θ a real band-limited field scaled to max |θ| = 1.
SampledField unimodular_field(const Grid& grid, double hi, std::uint64_t seed, double amplitude = 1.0) {
  const SampledField r = random_field(grid, 0.0, hi, seed);
  const Eigen::ArrayXd theta = r.values().real();
  const double peak = theta.abs().maxCoeff();
  Eigen::ArrayXcd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    v(i) = std::polar(1.0, std::numbers::pi * amplitude * (peak > 0.0 ? theta(i) / peak : 0.0));
  }
  return {grid, std::move(v)};
}

// One hill-climbing proposal: additive band-limited noise for finite p,
// a random phase twist for p = ∞ (keeps unimodular fields unimodular).
SampledField perturb(const SampledField& f, const Exponent& p, double step, double band_hi, std::mt19937_64& rng) {
  const Grid& grid = f.grid();
  std::uniform_real_distribution<double> amount(0.0, step);
  const std::uint64_t s = rng();
  const double a = amount(rng);
  if (p.is_infinite()) return f * unimodular_field(grid, band_hi, s, a);
  const double scale = lp_norm(f, Exponent(2));
  return f + Complex(a * scale) * random_field(grid, 0.0, band_hi, s);
}

}  // namespace

double norm_ratio(const BilinearOperator& op, const SampledField& f, const SampledField& g,
                  const ExponentPair& exponents) {
  const double den = lp_norm(f, exponents.p1()) * lp_norm(g, exponents.p2());
  if (!(den > 0.0)) throw DomainError("norm ratio needs nonzero inputs");
  return lp_norm(op(f, g), exponents.p()) / den;
}

std::vector<Witness> witness_catalog(const Grid& grid, const Exponent& p, std::uint64_t seed, double modulation) {
  const double L = grid.side();
  FieldParams params;
  params.center = grid_center(grid);
  std::vector<Witness> base;
  for (double w : {L / 32, L / 16, L / 8}) {
    params.width = w;
    base.push_back({"gaussian(w=" + fmt(w) + ")", make_test_field(FieldKind::gaussian, params, grid, 0)});
  }
  for (double r : {grid.spacing() / 2, L / 32, L / 16}) {
    params.radius = r;
    base.push_back({"ball(r=" + fmt(r) + ")", make_test_field(FieldKind::ball_indicator, params, grid, 0)});
  }
  const double bands[3][2] = {{0.0, 0.5}, {0.5, 1.0}, {modulation - 0.125, modulation + 0.125}};
  for (int i = 0; i < 3; ++i) {
    const double lo = std::max(0.0, bands[i][0]);
    const double hi = std::min(grid.nyquist(), bands[i][1]);
    base.push_back({"random[" + fmt(lo) + "," + fmt(hi) + "]", random_field(grid, lo, hi, derive_seed(seed, 10 + i))});
  }
  std::vector<Witness> out = base;
  for (const auto& w : base) out.push_back({"mod:" + w.id, modulate(w.field, axis_frequency(modulation))});
  if (p.is_infinite()) {
    for (int i = 0; i < 3; ++i) {
      const double hi = 0.25 * (i + 1);
      out.push_back({"unimodular(" + fmt(hi) + ")", unimodular_field(grid, hi, derive_seed(seed, 20 + i))});
    }
    const SampledField one(grid, Eigen::ArrayXcd::Ones(grid.size()));
    out.push_back({"constant", one});
    out.push_back({"mod:constant", modulate(one, axis_frequency(modulation))});
  }
  return out;
}

NormEstimate estimate_bilinear_norm(const BilinearOperator& op, const ExponentPair& exponents, const Grid& grid,
                                    int trials, std::uint64_t seed, const SearchOptions& options) {
  if (trials < 1) throw ValidationError("trials", "need at least one trial");
  const auto cf = witness_catalog(grid, exponents.p1(), derive_seed(seed, 1), options.modulation);
  const auto cg = witness_catalog(grid, exponents.p2(), derive_seed(seed, 2), options.modulation);

  struct Scored {
    double ratio;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Scored> scan;
  for (std::size_t i = 0; i < cf.size(); ++i) {
    for (std::size_t j = 0; j < cg.size(); ++j) scan.push_back({norm_ratio(op, cf[i].field, cg[j].field, exponents), i, j});
  }
  std::stable_sort(scan.begin(), scan.end(), [](const Scored& a, const Scored& b) { return a.ratio > b.ratio; });

  NormEstimate best{scan.front().ratio, cf[scan.front().i].field, cg[scan.front().j].field, cf[scan.front().i].id,
                    cg[scan.front().j].id, exponents, trials, seed};
  const double band_hi = std::max(1.5, 2.0 * options.modulation);
  for (int t = 0; t < trials; ++t) {
    const Scored& start = scan[static_cast<std::size_t>(t) % scan.size()];
    std::mt19937_64 rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(t)));
    SampledField f = cf[start.i].field;
    SampledField g = cg[start.j].field;
    double ratio = start.ratio;
    for (int step = 0; step < options.hill_steps; ++step) {
      const bool on_f = step % 2 == 0;
      SampledField f2 = on_f ? perturb(f, exponents.p1(), options.step, band_hi, rng) : f;
      SampledField g2 = on_f ? g : perturb(g, exponents.p2(), options.step, band_hi, rng);
      const double den = lp_norm(f2, exponents.p1()) * lp_norm(g2, exponents.p2());
      if (!(den > 0.0)) continue;
      const double r = lp_norm(op(f2, g2), exponents.p()) / den;
      if (r > ratio) {
        ratio = r;
        f = std::move(f2);
        g = std::move(g2);
      }
    }
    if (ratio > best.value) {
      const std::string suffix = "+climb" + std::to_string(t);
      best = {ratio, f, g, cf[start.i].id + suffix, cg[start.j].id + suffix, exponents, trials, seed};
    }
  }
  return best;
}

LogFit fit_log2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) throw ValidationError("points", "a fit needs at least 4 points");
  std::vector<double> ly;
  for (double v : y) {
    if (!(v > 0.0)) throw DomainError("log fit needs positive values");
    ly.push_back(std::log2(v));
  }
  const auto m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += ly[i];
    sxx += x[i] * x[i];
    sxy += x[i] * ly[i];
  }
  LogFit fit;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

DecayFit decay_fit(const std::function<BilinearOperator(int)>& family, const ExponentPair& exponents,
                   const Grid& grid, const std::vector<int>& js, int trials, std::uint64_t seed,
                   const SearchOptions& options) {
  if (js.size() < 4) throw ValidationError("j_range", "decay fit needs at least 4 piece indices");
  DecayFit out;
  out.js = js;
  for (int j : js) {
    const NormEstimate est = estimate_bilinear_norm(family(j), exponents, grid, trials, seed, options);
    out.norms.push_back(est.value);
    out.witness_ids.push_back(est.witness_f_id + "|" + est.witness_g_id);
  }
  if (std::any_of(out.norms.begin(), out.norms.end(), [](double v) { return !(v > 0.0); })) {
    out.degenerate = true;
    return out;
  }
  const LogFit fit = fit_log2(std::vector<double>(js.begin(), js.end()), out.norms);
  out.slope = fit.slope;
  out.epsilon = -fit.slope;
  out.residual = fit.residual;
  return out;
}

ScalingReport lemma1_scaling_experiment(const Exponent& p, double b, const std::vector<double>& widths,
                                        const Grid& grid, std::uint64_t seed, const SearchOptions& options) {
  const Rational inv = p.reciprocal();
  if (inv < Rational(1, 2) || inv > Rational(1)) throw DomainError("band operator scaling needs 1 <= p <= 2");
  if (!(b > 0.0) || b > grid.nyquist()) throw ValidationError("b", "band end must lie in (0, N/(2L)]");
  if (widths.empty()) throw ValidationError("widths", "need at least one width");
  const int n = grid.dim();
  const Exponent two(2);
  ScalingReport report{p, b, widths, {}, {}, std::nullopt, inv.to_double() - 0.5};

  FieldParams params;
  params.center = grid_center(grid);
  for (std::size_t wi = 0; wi < widths.size(); ++wi) {
    const double w = widths[wi];
    if (!(w > 0.0) || w > b) throw ValidationError("widths", "widths must lie in (0, b]");
    const double a = b - w;
    const BandSpec band{a, b};
    const auto ratio = [&](const SampledField& f) { return lp_norm(band_operator(f, band), two) / lp_norm(f, p); };

    std::vector<Witness> catalog;
    for (double c : {0.5, 1.0, 2.0}) {
      params.width = std::min(c / w, grid.side() / 8);
      catalog.push_back({"mod:gaussian(w=" + fmt(params.width) + ")",
                         modulate(make_test_field(FieldKind::gaussian, params, grid, 0), axis_frequency(b - w / 2))});
    }
    params.radius = grid.spacing() / 2;
    catalog.push_back({"delta", make_test_field(FieldKind::ball_indicator, params, grid, 0)});
    for (int i = 0; i < 3; ++i) {
      catalog.push_back({"random[" + fmt(a) + "," + fmt(b) + "]#" + std::to_string(i),
                         random_field(grid, a, b, derive_seed(seed, 30 + i + 10 * wi))});
    }

    std::size_t best_i = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const double r = ratio(catalog[i].field);
      if (r > best) {
        best = r;
        best_i = i;
      }
    }
    std::string id = catalog[best_i].id;
    SampledField f = catalog[best_i].field;
    std::mt19937_64 rng(derive_seed(seed, 200 + wi));
    const double hi = std::min(grid.nyquist(), b + w);
    bool climbed = false;
    for (int step = 0; step < options.hill_steps; ++step) {
      std::uniform_real_distribution<double> amount(0.0, options.step);
      const std::uint64_t s = rng();
      const SampledField f2 =
          f + Complex(amount(rng) * lp_norm(f, two)) * random_field(grid, std::max(0.0, a - w), hi, s);
      const double r = ratio(f2);
      if (r > best) {
        best = r;
        f = f2;
        climbed = true;
      }
    }
    report.estimates.push_back(best);
    report.witness_ids.push_back(climbed ? id + "+climb" : id);
  }
  if (widths.size() >= 4) {
    std::vector<double> x;
    for (double w : widths) x.push_back(std::log2(w * std::pow(b, n - 1)));
    report.fit = fit_log2(x, report.estimates);
  }
  return report;
}

NormEstimate corollary_experiment(double alpha, const Grid& grid, int trials, std::uint64_t seed,
                                  const SearchOptions& options) {
  if (!(alpha > 0.0)) throw DomainError("corollary experiment needs alpha > 0");
  const MultiplierSpec spec{alpha, 1.0};
  const BilinearOperator op = [spec](const SampledField& f, const SampledField& g) {
    return br_apply_oracle(f, g, spec);
  };
  return estimate_bilinear_norm(op, ExponentPair(Exponent(1), Exponent::infinity()), grid, trials, seed, options);
}

void write_decay_csv(const std::string& path, const DecayFit& fit) {
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  os << "j,estimate,witness\n" << std::setprecision(17);
  for (std::size_t i = 0; i < fit.js.size(); ++i) os << fit.js[i] << ',' << fit.norms[i] << ',' << fit.witness_ids[i] << '\n';
  if (!os) throw IoError(path, "write failed");
}

void write_scaling_csv(const std::string& path, const ScalingReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  os << "w,estimate,witness\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.widths.size(); ++i) {
    os << report.widths[i] << ',' << report.estimates[i] << ',' << report.witness_ids[i] << '\n';
  }
  if (!os) throw IoError(path, "write failed");
}

void write_norm_estimate(const std::string& directory, const std::string& stem, const NormEstimate& estimate) {
  namespace fs = std::filesystem;
  const std::string f_name = stem + "_f.bin";
  const std::string g_name = stem + "_g.bin";
  write_field_binary((fs::path(directory) / f_name).string(), estimate.witness_f);
  write_field_binary((fs::path(directory) / g_name).string(), estimate.witness_g);
  const Grid& grid = estimate.witness_f.grid();
  nlohmann::ordered_json j;
  j["value"] = estimate.value;
  j["exponents"] = {{"p1", estimate.exponents.p1().str()},
                    {"p2", estimate.exponents.p2().str()},
                    {"p", estimate.exponents.p().str()}};
  j["grid"] = {{"n", grid.dim()}, {"N", grid.samples()}, {"L", grid.side()}};
  j["trials"] = estimate.trials;
  j["seed"] = estimate.seed;
  j["witness_f"] = {{"id", estimate.witness_f_id}, {"file", f_name}};
  j["witness_g"] = {{"id", estimate.witness_g_id}, {"file", g_name}};
  const std::string path = (fs::path(directory) / (stem + ".json")).string();
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError(path, "write failed");
}

}  // namespace brlab
