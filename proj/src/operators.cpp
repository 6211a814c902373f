#include "brlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "brlab/errors.hpp"
#include "brlab/kernel.hpp"

namespace brlab {
namespace {

void require_same_grid(const SampledField& f, const SampledField& g) {
  if (!(f.grid() == g.grid())) throw ValidationError("grid", "f and g live on different grids");
}

// Spectrum restricted to lo <= |ξ| < hi (<= hi when closed_hi).
Eigen::ArrayXcd annulus_mask(const Eigen::ArrayXcd& spectrum, const Eigen::ArrayXd& radii, double lo, double hi,
                             bool closed_hi) {
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(spectrum.size());
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const double r = radii(i);
    if (r >= lo && (r < hi || (closed_hi && r <= hi))) out(i) = spectrum(i);
  }
  return out;
}

// Bin of |ξ| among `count` half-open bins of [lo, hi); the last bin is closed.
int bin_of(double r, double lo, double hi, int count) {
  if (r < lo || r > hi) return -1;
  const int b = static_cast<int>(std::floor((r - lo) / (hi - lo) * count));
  return std::min(b, count - 1);
}

void check_pair_budget(const Grid& grid, const OperationBudget& budget) {
  const auto size = static_cast<std::uint64_t>(grid.size());
  if (size * size > budget.max_pair_ops) {
    throw BudgetError("pair sum needs " + std::to_string(size * size) + " operations, cap is " +
                      std::to_string(budget.max_pair_ops));
  }
}

}  // namespace

void MultiplierSpec::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha", "alpha must be >= 0");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("R", "radius must be positive");
}

double MultiplierSpec::operator()(double s, double t) const {
  const double u = 1.0 - (s * s + t * t) / (radius * radius);
  if (alpha == 0.0) return u >= 0.0 ? 1.0 : 0.0;
  return u > 0.0 ? std::pow(u, alpha) : 0.0;
}

void BandSpec::validate() const {
  if (!(a >= 0.0)) throw ValidationError("a", "band start must be >= 0");
  if (!(b > a) || !std::isfinite(b)) throw ValidationError("b", "band end must exceed its start");
  if (!m) throw ValidationError("m", "band multiplier is empty");
}

RestrictionResult restriction(const SampledField& f, double lambda, double width) {
  const Grid& grid = f.grid();
  if (!(lambda > 0.0)) throw ValidationError("lambda", "lambda must be positive");
  if (!(width >= grid.frequency_spacing() * (1.0 - 1e-12))) {
    throw ValidationError("width", "width must be at least the frequency spacing 1/L");
  }
  const Eigen::ArrayXd radii = grid.frequency_radii();
  Eigen::ArrayXcd masked =
      annulus_mask(dft_forward(f).values(), radii, lambda - width / 2, lambda + width / 2, true);
  const bool empty = (masked == Complex(0.0)).all();
  auto density = dft_inverse(SampledField(grid, std::move(masked)));
  return {(1.0 / width) * density, empty};
}

SampledField band_operator(const SampledField& f, const BandSpec& band) {
  band.validate();
  const Grid& grid = f.grid();
  const Eigen::ArrayXd radii = grid.frequency_radii();
  Eigen::ArrayXcd spectrum = dft_forward(f).values();
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const double r = radii(i);
    spectrum(i) *= (r >= band.a && r <= band.b) ? band.m(r) : Complex(0.0);
  }
  return dft_inverse(SampledField(grid, std::move(spectrum)));
}

SampledField band_operator_quadrature(const SampledField& f, const BandSpec& band, int nodes) {
  band.validate();
  if (nodes < 1) throw ValidationError("nodes", "need at least one quadrature node");
  const Grid& grid = f.grid();
  const Eigen::ArrayXd radii = grid.frequency_radii();
  const Eigen::ArrayXcd spectrum = dft_forward(f).values();
  const double h = (band.b - band.a) / nodes;
  SampledField out = SampledField::zeros(grid);
  for (int i = 0; i < nodes; ++i) {
    const double lo = band.a + i * h;
    Eigen::ArrayXcd part = annulus_mask(spectrum, radii, lo, lo + h, i == nodes - 1);
    if ((part == Complex(0.0)).all()) continue;
    // R_λ f λ^{n-1} h at the bin center is the bin's annulus component.
    out = out + band.m(lo + h / 2) * dft_inverse(SampledField(grid, std::move(part)));
  }
  return out;
}

SampledField apply_radial_symbol(const SampledField& f, const SampledField& g, const RadialSymbol& symbol,
                                 const OperationBudget& budget) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  check_pair_budget(grid, budget);
  const Eigen::ArrayXcd F = dft_forward(f).values();
  const Eigen::ArrayXcd G = dft_forward(g).values();
  const Eigen::ArrayXi r2 = grid.lattice_radius_squared();

  // Symbol tabulated once per pair of distinct lattice radii.
  std::vector<int> distinct(r2.data(), r2.data() + r2.size());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto slot_of = [&](int v) {
    return static_cast<Eigen::Index>(std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin());
  };
  Eigen::ArrayXi slot(r2.size());
  for (Eigen::Index i = 0; i < r2.size(); ++i) slot(i) = static_cast<int>(slot_of(r2(i)));
  const auto D = static_cast<Eigen::Index>(distinct.size());
  Eigen::MatrixXd table(D, D);
  for (Eigen::Index a = 0; a < D; ++a) {
    for (Eigen::Index b = 0; b < D; ++b) {
      table(a, b) = symbol(std::sqrt(double(distinct[a])) / grid.side(), std::sqrt(double(distinct[b])) / grid.side());
    }
  }

  Eigen::ArrayXcd H = Eigen::ArrayXcd::Zero(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (F(i) == Complex(0.0)) continue;
    const auto ii = grid.multi_index(i);
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      const double m = table(slot(i), slot(j));
      if (m == 0.0) continue;
      const auto jj = grid.multi_index(j);
      H(grid.wrap(ii[0] + jj[0], ii[1] + jj[1])) += m * F(i) * G(j);
    }
  }
  const double scale = grid.dim() == 1 ? 1.0 / grid.side() : 1.0 / (grid.side() * grid.side());
  return dft_inverse(SampledField(grid, scale * H));
}

SampledField br_apply_oracle(const SampledField& f, const SampledField& g, const MultiplierSpec& spec,
                             const OperationBudget& budget) {
  spec.validate();
  return apply_radial_symbol(f, g, spec, budget);
}

SampledField br_apply_radial(const SampledField& f, const SampledField& g, const MultiplierSpec& spec, int nodes) {
  spec.validate();
  require_same_grid(f, g);
  if (nodes < 0) throw ValidationError("nodes", "node count must be >= 0");
  const Grid& grid = f.grid();
  const Eigen::ArrayXcd F = dft_forward(f).values();
  const Eigen::ArrayXcd G = dft_forward(g).values();

  // Node λ_p and the DFT bins it collects.
  std::vector<double> lambdas;
  std::vector<int> node_of(static_cast<std::size_t>(grid.size()), -1);
  if (nodes == 0) {
    const Eigen::ArrayXi r2 = grid.lattice_radius_squared();
    std::map<int, int> index;
    for (Eigen::Index i = 0; i < r2.size(); ++i) {
      const double r = std::sqrt(double(r2(i))) / grid.side();
      if (r <= spec.radius) index.emplace(r2(i), 0);
    }
    for (auto& [key, slot] : index) {
      slot = static_cast<int>(lambdas.size());
      lambdas.push_back(std::sqrt(double(key)) / grid.side());
    }
    for (Eigen::Index i = 0; i < r2.size(); ++i) {
      if (auto it = index.find(r2(i)); it != index.end()) node_of[i] = it->second;
    }
  } else {
    const Eigen::ArrayXd radii = grid.frequency_radii();
    const double h = spec.radius / nodes;
    for (int p = 0; p < nodes; ++p) lambdas.push_back((p + 0.5) * h);
    for (Eigen::Index i = 0; i < radii.size(); ++i) node_of[i] = bin_of(radii(i), 0.0, spec.radius, nodes);
  }

  const auto P = static_cast<Eigen::Index>(lambdas.size());
  // Columns: annulus components λ^{n-1} R_λ f · Δλ at each node.
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(grid.size(), P);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(grid.size(), P);
  for (Eigen::Index p = 0; p < P; ++p) {
    Eigen::ArrayXcd fp = Eigen::ArrayXcd::Zero(grid.size());
    Eigen::ArrayXcd gp = Eigen::ArrayXcd::Zero(grid.size());
    bool any = false;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (node_of[i] == p) {
        fp(i) = F(i);
        gp(i) = G(i);
        any = true;
      }
    }
    if (!any) continue;
    A.col(p) = dft_inverse(SampledField(grid, std::move(fp))).values().matrix();
    B.col(p) = dft_inverse(SampledField(grid, std::move(gp))).values().matrix();
  }
  Eigen::MatrixXd M(P, P);
  for (Eigen::Index p = 0; p < P; ++p) {
    for (Eigen::Index q = 0; q < P; ++q) M(p, q) = spec(lambdas[p], lambdas[q]);
  }
  const Eigen::MatrixXcd C = B * M.transpose().cast<Complex>();
  Eigen::ArrayXcd out = A.cwiseProduct(C).rowwise().sum().array();
  return {grid, std::move(out)};
}

SampledField br_apply_kernel(const SampledField& f, const SampledField& g, const MultiplierSpec& spec,
                             const OperationBudget& budget) {
  spec.validate();
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  check_pair_budget(grid, budget);
  const int n = grid.dim();
  const double h = grid.spacing();
  const double scale = std::pow(spec.radius, 2 * n);

  // S_R(x₁, x₂) = R^{2n} S_1(R x₁, R x₂) depends on the integer offsets only
  // through |k₁|² + |k₂|².
  std::map<int, double> kernel_cache;
  auto kernel_at = [&](int key) {
    auto [it, fresh] = kernel_cache.try_emplace(key, 0.0);
    if (fresh) it->second = scale * kernel_closed_form_radial(n, spec.radius * h * std::sqrt(double(key)), spec.alpha);
    return it->second;
  };
  const Eigen::ArrayXi r2 = grid.lattice_radius_squared();
  const SampledField G = dft_forward(g);

  // Transform of the row K(y₁, ·), shared by every y₁ with the same |k₁|².
  std::map<int, Eigen::ArrayXcd> row_cache;
  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(grid.size());
  for (Eigen::Index y1 = 0; y1 < grid.size(); ++y1) {
    auto [it, fresh] = row_cache.try_emplace(r2(y1));
    if (fresh) {
      Eigen::ArrayXcd row(grid.size());
      for (Eigen::Index y2 = 0; y2 < grid.size(); ++y2) row(y2) = kernel_at(r2(y1) + r2(y2));
      it->second = dft_forward(SampledField(grid, std::move(row))).values();
    }
    // (h^n Σ_{y₂} g(x - y₂) K(y₁, y₂)) as a periodic convolution.
    const SampledField conv = dft_inverse(SampledField(grid, G.values() * it->second));
    const auto k1 = grid.multi_index(y1);
    for (Eigen::Index x = 0; x < grid.size(); ++x) {
      const auto xi = grid.multi_index(x);
      out(x) += f[grid.wrap(xi[0] - k1[0], xi[1] - k1[1])] * conv[x];
    }
  }
  return {grid, grid.cell_measure() * out};
}

}  // namespace brlab
