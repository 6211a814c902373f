#include "brlab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// In-place transform of every axis line; Eigen's inverse carries the 1/N.
void fft_lines(Eigen::ArrayXcd& data, int dim, int n, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(n);
  std::vector<Complex> out(n);
  auto run = [&](Eigen::Index offset, Eigen::Index stride) {
    for (int i = 0; i < n; ++i) in[i] = data(offset + i * stride);
    if (inverse) {
      fft.inv(out, in);
    } else {
      fft.fwd(out, in);
    }
    for (int i = 0; i < n; ++i) data(offset + i * stride) = out[i];
  };
  if (dim == 1) {
    run(0, 1);
    return;
  }
  for (int r = 0; r < n; ++r) run(Eigen::Index(r) * n, 1);
  for (int c = 0; c < n; ++c) run(c, n);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) os.put(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

std::uint64_t get_bytes(std::istream& is, int count, const std::string& path) {
  std::uint64_t v = 0;
  for (int b = 0; b < count; ++b) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw IoError(path, "truncated binary field");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

}  // namespace

Grid::Grid(int dim, int samples, double side) : dim_(dim), samples_(samples), side_(side) {
  if (dim != 1 && dim != 2) throw ValidationError("n", "grid dimension must be 1 or 2");
  if (samples < 8 || !std::has_single_bit(static_cast<unsigned>(samples))) {
    throw ValidationError("N", "samples per axis must be a power of two >= 8");
  }
  if (!(side > 0.0) || !std::isfinite(side)) throw ValidationError("L", "side length must be positive");
}

std::array<int, 2> Grid::multi_index(Eigen::Index flat) const noexcept {
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / samples_), static_cast<int>(flat % samples_)};
}

Eigen::Index Grid::wrap(int i0, int i1) const noexcept {
  const auto mod = [n = samples_](int k) { return ((k % n) + n) % n; };
  if (dim_ == 1) return mod(i0);
  return Eigen::Index(mod(i0)) * samples_ + mod(i1);
}

Eigen::Vector2d Grid::frequency(Eigen::Index flat) const noexcept {
  const auto idx = multi_index(flat);
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();
  for (int a = 0; a < dim_; ++a) xi(a) = signed_index(idx[a]) / side_;
  return xi;
}

Eigen::ArrayXd Grid::frequency_radii() const {
  Eigen::ArrayXd out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out(i) = frequency(i).norm();
  return out;
}

Eigen::ArrayXi Grid::lattice_radius_squared() const {
  Eigen::ArrayXi out(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    const auto idx = multi_index(i);
    int r2 = 0;
    for (int a = 0; a < dim_; ++a) r2 += signed_index(idx[a]) * signed_index(idx[a]);
    out(i) = r2;
  }
  return out;
}

Eigen::Vector2d Grid::displacement(Eigen::Index flat, const Eigen::Vector2d& center) const noexcept {
  const auto idx = multi_index(flat);
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (int a = 0; a < dim_; ++a) {
    double v = idx[a] * spacing() - center(a);
    v -= side_ * std::round(v / side_);
    d(a) = v;
  }
  return d;
}

// ---------------------------------------------------------------------------

SampledField::SampledField(Grid grid, Eigen::ArrayXcd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ValidationError("values", "field size does not match grid");
  if (!values_.allFinite()) throw ValidationError("values", "field has non-finite samples");
}

SampledField operator+(const SampledField& a, const SampledField& b) {
  if (!(a.grid_ == b.grid_)) throw ValidationError("grid", "fields live on different grids");
  return {a.grid_, a.values_ + b.values_};
}

SampledField operator-(const SampledField& a, const SampledField& b) {
  if (!(a.grid_ == b.grid_)) throw ValidationError("grid", "fields live on different grids");
  return {a.grid_, a.values_ - b.values_};
}

SampledField operator*(const SampledField& a, const SampledField& b) {
  if (!(a.grid_ == b.grid_)) throw ValidationError("grid", "fields live on different grids");
  return {a.grid_, a.values_ * b.values_};
}

SampledField dft_forward(const SampledField& f) {
  const Grid& g = f.grid();
  Eigen::ArrayXcd data = f.values();
  fft_lines(data, g.dim(), g.samples(), false);
  data *= g.cell_measure();
  return {g, std::move(data)};
}

SampledField dft_inverse(const SampledField& spectrum) {
  const Grid& g = spectrum.grid();
  Eigen::ArrayXcd data = spectrum.values();
  fft_lines(data, g.dim(), g.samples(), true);
  data /= g.cell_measure();
  return {g, std::move(data)};
}

double lp_norm(const SampledField& f, const Exponent& p) {
  const auto& v = f.values();
  if (p.is_infinite()) return v.abs().maxCoeff();
  const double q = p.to_double();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::pow(std::abs(v(i)), q);
  return std::pow(f.grid().cell_measure() * sum, 1.0 / q);
}

double relative_l2_error(const SampledField& a, const SampledField& b) {
  const double den = (b.values()).matrix().norm();
  const double num = (a.values() - b.values()).matrix().norm();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::ball_indicator: return "ball_indicator";
    case FieldKind::band_limited_random: return "band_limited_random";
    case FieldKind::bump: return "bump";
  }
  return "unknown";
}

FieldKind parse_field_kind(const std::string& text) {
  for (auto k : {FieldKind::gaussian, FieldKind::ball_indicator, FieldKind::band_limited_random, FieldKind::bump}) {
    if (to_string(k) == text) return k;
  }
  throw ValidationError("kind", "unknown field kind '" + text + "'");
}

SampledField make_test_field(FieldKind kind, const FieldParams& params, const Grid& grid, std::uint64_t seed) {
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(params.center(a) >= 0.0 && params.center(a) < grid.side())) {
      throw ValidationError("center", "center must lie inside [0, L)^n");
    }
  }
  Eigen::ArrayXcd values = Eigen::ArrayXcd::Zero(grid.size());
  switch (kind) {
    case FieldKind::gaussian: {
      if (!(params.width > 0.0)) throw ValidationError("width", "gaussian width must be positive");
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double r2 = grid.displacement(i, params.center).squaredNorm();
        values(i) = std::exp(-std::numbers::pi * r2 / (params.width * params.width));
      }
      break;
    }
    case FieldKind::ball_indicator:
    case FieldKind::bump: {
      if (!(params.radius > 0.0) || !(params.radius < grid.side() / 4.0)) {
        throw ValidationError("radius", "radius must lie in (0, L/4)");
      }
      const double rho2 = params.radius * params.radius;
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double r2 = grid.displacement(i, params.center).squaredNorm();
        if (kind == FieldKind::ball_indicator) {
          values(i) = r2 <= rho2 ? 1.0 : 0.0;
        } else if (r2 < rho2) {
          values(i) = std::exp(1.0 - 1.0 / (1.0 - r2 / rho2));
        }
      }
      break;
    }
    case FieldKind::band_limited_random: {
      if (!(params.band_lo >= 0.0) || !(params.band_hi > params.band_lo) || params.band_hi > grid.nyquist()) {
        throw ValidationError("band", "annulus must satisfy 0 <= lo < hi <= N/(2L)");
      }
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal;
      Eigen::ArrayXcd spectrum = Eigen::ArrayXcd::Zero(grid.size());
      const Eigen::ArrayXd radii = grid.frequency_radii();
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        if (radii(i) >= params.band_lo && radii(i) <= params.band_hi) spectrum(i) = Complex(re, im);
      }
      if ((spectrum == Complex(0.0)).all()) throw ValidationError("band", "annulus contains no lattice frequencies");
      const SampledField f = dft_inverse(SampledField(grid, spectrum));
      return (1.0 / lp_norm(f, Exponent(2))) * f;
    }
  }
  return {grid, std::move(values)};
}

SampledField modulate(const SampledField& f, const Eigen::Vector2d& frequency) {
  const Grid& g = f.grid();
  Eigen::Vector2d snapped = Eigen::Vector2d::Zero();
  for (int a = 0; a < g.dim(); ++a) snapped(a) = std::round(frequency(a) * g.side()) / g.side();
  Eigen::ArrayXcd v = f.values();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) phase += idx[a] * g.spacing() * snapped(a);
    v(i) *= std::polar(1.0, kTwoPi * phase);
  }
  return {g, std::move(v)};
}

// ---------------------------------------------------------------------------

void write_field_csv(const std::string& path, const SampledField& f) {
  std::ofstream os(path);
  if (!os) throw IoError(path, "cannot open for writing");
  const Grid& g = f.grid();
  os << (g.dim() == 1 ? "i0,re,im\n" : "i0,i1,re,im\n");
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    os << idx[0] << ',';
    if (g.dim() == 2) os << idx[1] << ',';
    os << f[i].real() << ',' << f[i].imag() << '\n';
  }
  if (!os) throw IoError(path, "write failed");
}

SampledField read_field_csv(const std::string& path, double side) {
  std::ifstream is(path);
  if (!is) throw IoError(path, "cannot open for reading");
  std::string line;
  std::getline(is, line);
  const int dim = line.rfind("i0,i1", 0) == 0 ? 2 : 1;
  std::vector<std::array<long, 2>> idx;
  std::vector<Complex> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::array<long, 2> k{0, 0};
    double re = 0.0;
    double im = 0.0;
    row >> k[0];
    if (dim == 2) row >> k[1];
    row >> re >> im;
    if (!row) throw IoError(path, "malformed row '" + line + "'");
    idx.push_back(k);
    vals.emplace_back(re, im);
  }
  const auto samples = static_cast<int>(dim == 1 ? vals.size() : std::lround(std::sqrt(double(vals.size()))));
  Grid grid(dim, samples, side);
  if (static_cast<Eigen::Index>(vals.size()) != grid.size()) throw IoError(path, "sample count is not N^n");
  Eigen::ArrayXcd data(grid.size());
  for (std::size_t r = 0; r < vals.size(); ++r) data(grid.wrap(idx[r][0], idx[r][1])) = vals[r];
  return {grid, std::move(data)};
}

void write_field_binary(const std::string& path, const SampledField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open for writing");
  put_u32(os, static_cast<std::uint32_t>(f.grid().dim()));
  put_u32(os, static_cast<std::uint32_t>(f.grid().samples()));
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    put_f64(os, f[i].real());
    put_f64(os, f[i].imag());
  }
  if (!os) throw IoError(path, "write failed");
}

SampledField read_field_binary(const std::string& path, double side) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path, "cannot open for reading");
  const auto dim = static_cast<int>(get_bytes(is, 4, path));
  const auto samples = static_cast<int>(get_bytes(is, 4, path));
  Grid grid(dim, samples, side);
  Eigen::ArrayXcd data(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double re = std::bit_cast<double>(get_bytes(is, 8, path));
    const double im = std::bit_cast<double>(get_bytes(is, 8, path));
    data(i) = Complex(re, im);
  }
  return {grid, std::move(data)};
}

}  // namespace brlab
