// brlab command-line front end: one subcommand per experiment family, one
// output directory per run.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brlab/bessel.hpp"
#include "brlab/decomposition.hpp"
#include "brlab/errors.hpp"
#include "brlab/grid.hpp"
#include "brlab/kernel.hpp"
#include "brlab/norms.hpp"
#include "brlab/operators.hpp"
#include "brlab/regions.hpp"

#ifndef BRLAB_VERSION
#define BRLAB_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace brlab;

namespace {

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kBudget = 3, kIo = 4 };

// ---------------------------------------------------------------------------
// Parsing helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Real parameter given as "a/b" or a decimal.
double parse_real(const std::string& text, const std::string& key) {
  if (text.find('/') != std::string::npos) {
    try {
      return Rational::parse(text).to_double();
    } catch (const std::exception&) {
      throw ValidationError(key, "cannot parse '" + text + "'");
    }
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, "cannot parse '" + text + "' as a number");
  }
}

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_real(s, key));
  if (out.empty()) throw ValidationError(key, "empty list");
  return out;
}

// Exponents are exact: "a/b", an integer, or "inf".
Exponent parse_exponent(const std::string& text, const std::string& key) {
  try {
    return Exponent::parse(text);
  } catch (const ValidationError&) {
    throw ValidationError(key, "exponent '" + text + "' must be an integer, a/b or inf");
  }
}

// "a:b" (inclusive) or "j0,j1,...".
std::vector<int> parse_index_range(const std::string& text, const std::string& key) {
  std::vector<int> out;
  try {
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      const int lo = std::stoi(text.substr(0, colon));
      const int hi = std::stoi(text.substr(colon + 1));
      if (hi < lo) throw ValidationError(key, "empty range '" + text + "'");
      for (int j = lo; j <= hi; ++j) out.push_back(j);
    } else {
      for (const auto& s : split(text, ',')) out.push_back(std::stoi(s));
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError(key, "cannot parse range '" + text + "'");
  }
  if (out.empty()) throw ValidationError(key, "empty range");
  for (int j : out) {
    if (j < 0) throw ValidationError(key, "indices must be >= 0");
  }
  return out;
}

template <typename T>
T require(const std::optional<T>& value, const std::string& key) {
  if (!value) throw ValidationError(key, "missing required option --" + key);
  return *value;
}

std::string to_text(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Run directory, manifest, outputs

struct Run {
  std::string command;
  fs::path dir;
  json config = json::object();
  json summary = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = file(name);
    std::ofstream os(p);
    if (!os) throw IoError(p.string(), "cannot open for writing");
    os << std::setprecision(17);
    return os;
  }

  void write_manifest(const json& error = nullptr) const {
    json m;
    m["tool"] = "brlab";
    m["version"] = BRLAB_VERSION;
    m["command"] = command;
    m["config"] = config;
    m["summary"] = summary;
    m["outputs"] = outputs;
    m["status"] = error.is_null() ? "ok" : "error";
    if (!error.is_null()) m["error"] = error;
    m["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path p = dir / "manifest.json";
    std::ofstream os(p);
    if (!os) throw IoError(p.string(), "cannot open for writing");
    os << m.dump(2) << '\n';
  }
};

struct CommonOptions {
  std::string out;
  std::string out_root;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--out", common.out, "Run directory (default: <root>/<command>-<timestamp>-s<seed>)");
  sub->add_option("--out-root", common.out_root, "Root for run directories (default: $BRLAB_OUT or ./brlab-runs)");
  sub->add_option("--seed", common.seed, "Seed for randomized experiments");
}

// Run whose directory exists; failures still leave a manifest there. The
// Run itself lives in main, past the command's stack frame.
Run* active_run = nullptr;

void open_run(Run& run, const CommonOptions& common) {
  std::error_code ec;
  if (!common.out.empty()) {
    run.dir = common.out;
  } else {
    fs::path root = common.out_root;
    if (root.empty()) {
      const char* env = std::getenv("BRLAB_OUT");
      root = env && *env ? env : "brlab-runs";
    }
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%S", &tm);
    const std::string base = run.command + "-" + stamp + "-s" + std::to_string(common.seed.value_or(0));
    run.dir = root / base;
    for (int i = 1; fs::exists(run.dir, ec); ++i) run.dir = root / (base + "-" + std::to_string(i));
  }
  fs::create_directories(run.dir, ec);
  if (ec || !fs::is_directory(run.dir)) throw IoError(run.dir.string(), "cannot create run directory");
  run.config["seed"] = common.seed ? json(*common.seed) : json(nullptr);
  active_run = &run;
}

// ---------------------------------------------------------------------------
// Grid and fields

struct GridOptions {
  int n = 1;
  std::optional<int> N;
  double L = 32.0;

  Grid make(int default_1d, int default_2d) const {
    return Grid(n, N.value_or(n == 1 ? default_1d : default_2d), L);
  }
};

void add_grid(CLI::App* sub, GridOptions& g) {
  sub->add_option("--n", g.n, "Spatial dimension (1 or 2)");
  sub->add_option("--N", g.N, "Samples per axis (power of two)");
  sub->add_option("--L", g.L, "Side length of the periodic box");
}

json grid_json(const Grid& g) { return {{"n", g.dim()}, {"N", g.samples()}, {"L", g.side()}}; }

struct FieldOptions {
  std::string kind = "gaussian";
  double width = 6.0;
  double radius = 1.0;
  std::string band = "0,1";
  std::optional<double> center;
  std::string file;
};

void add_field(CLI::App* sub, const std::string& name, FieldOptions& f) {
  sub->add_option("--" + name + "-kind", f.kind, "gaussian | ball_indicator | band_limited_random | bump");
  sub->add_option("--" + name + "-width", f.width, "Gaussian width");
  sub->add_option("--" + name + "-radius", f.radius, "Ball or bump radius");
  sub->add_option("--" + name + "-band", f.band, "Random-field annulus lo,hi");
  sub->add_option("--" + name + "-center", f.center, "Center on every axis (default L/2)");
  sub->add_option("--" + name + "-file", f.file, "Read the field from a .csv or .bin file instead");
}

SampledField load_field(const FieldOptions& o, const std::string& name, const Grid& grid,
                        const std::optional<std::uint64_t>& seed, json& config) {
  if (!o.file.empty()) {
    config[name] = {{"file", o.file}};
    const bool binary = fs::path(o.file).extension() == ".bin";
    SampledField f = binary ? read_field_binary(o.file, grid.side()) : read_field_csv(o.file, grid.side());
    if (!(f.grid() == grid)) throw ValidationError(name + "-file", "field grid does not match --n/--N/--L");
    return f;
  }
  const FieldKind kind = parse_field_kind(o.kind);
  FieldParams p;
  const double c = o.center.value_or(grid.side() / 2);
  for (int a = 0; a < grid.dim(); ++a) p.center(a) = c;
  p.width = o.width;
  p.radius = o.radius;
  const auto band = parse_real_list(o.band, name + "-band");
  if (band.size() != 2) throw ValidationError(name + "-band", "expected lo,hi");
  p.band_lo = band[0];
  p.band_hi = band[1];
  if (kind == FieldKind::band_limited_random && !seed) {
    throw ValidationError("seed", "random fields need --seed");
  }
  config[name] = {{"kind", o.kind}, {"width", o.width}, {"radius", o.radius}, {"band", band}, {"center", c}};
  return make_test_field(kind, p, grid, seed.value_or(0));
}

void save_field(Run& run, const std::string& stem, const SampledField& f, const std::string& format) {
  if (format == "bin") {
    write_field_binary(run.file(stem + ".bin").string(), f);
  } else {
    write_field_csv(run.file(stem + ".csv").string(), f);
  }
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  CommonOptions common;
  GridOptions grid;
  FieldOptions f;
  FieldOptions g;
  std::optional<std::string> alpha;
  double R = 1.0;
  std::string paths = "oracle,radial";
  int nodes = 256;
  int J = 12;
  int K = 512;
  std::string format = "csv";
  std::uint64_t budget = OperationBudget{}.max_pair_ops;
};

int cmd_evaluate(EvaluateOptions& o, Run& run) {
  const double alpha = parse_real(require(o.alpha, "alpha"), "alpha");
  const MultiplierSpec spec{alpha, o.R};
  spec.validate();
  const auto paths = split(o.paths, ',');
  if (paths.empty()) throw ValidationError("paths", "no evaluation path given");
  for (const auto& p : paths) {
    if (p != "oracle" && p != "radial" && p != "kernel" && p != "separable") {
      throw ValidationError("paths", "unknown path '" + p + "'");
    }
    if (p == "separable" && (o.R != 1.0 || !(alpha > 0.0))) {
      throw ValidationError("paths", "the separable path needs R = 1 and alpha > 0");
    }
  }
  if (o.format != "csv" && o.format != "bin") throw ValidationError("format", "format must be csv or bin");
  if (o.nodes < 0) throw ValidationError("nodes", "nodes must be >= 0");
  if (o.J < 0) throw ValidationError("J", "J must be >= 0");
  if (o.K < 1) throw ValidationError("K", "K must be >= 1");
  const Grid grid = o.grid.make(256, 64);

  run.command = "evaluate";
  json config;
  const SampledField f = load_field(o.f, "f", grid, o.common.seed, config);
  const SampledField g = load_field(o.g, "g", grid, o.common.seed, config);
  open_run(run, o.common);
  run.config.update(config);
  run.config["grid"] = grid_json(grid);
  run.config["alpha"] = alpha;
  run.config["R"] = o.R;
  run.config["paths"] = paths;
  run.config["nodes"] = o.nodes;
  run.config["J"] = o.J;
  run.config["K"] = o.K;
  run.config["format"] = o.format;
  run.config["budget"] = o.budget;

  const OperationBudget budget{o.budget};
  const BumpFunction bump;
  std::vector<SampledField> outputs;
  for (const auto& p : paths) {
    if (p == "oracle") {
      outputs.push_back(br_apply_oracle(f, g, spec, budget));
    } else if (p == "radial") {
      outputs.push_back(br_apply_radial(f, g, spec, o.nodes));
    } else if (p == "kernel") {
      outputs.push_back(br_apply_kernel(f, g, spec, budget));
    } else {
      SampledField sum = SampledField::zeros(grid);
      for (int j = 0; j <= o.J; ++j) sum = sum + br_apply_separable(f, g, DyadicPiece(j, alpha), o.K, bump);
      outputs.push_back(sum);
    }
    save_field(run, "field_" + p, outputs.back(), o.format);
  }
  if (paths.size() > 1) {
    auto os = run.open("agreement.csv");
    os << "path_a,path_b,relative_l2_error\n";
    json rows = json::array();
    for (std::size_t a = 0; a < paths.size(); ++a) {
      for (std::size_t b = a + 1; b < paths.size(); ++b) {
        const double err = relative_l2_error(outputs[b], outputs[a]);
        os << paths[a] << ',' << paths[b] << ',' << err << '\n';
        std::cout << paths[a] << " vs " << paths[b] << ": relative L2 error " << to_text(err) << '\n';
        rows.push_back({{"path_a", paths[a]}, {"path_b", paths[b]}, {"relative_l2_error", err}});
      }
    }
    run.summary["agreement"] = rows;
  }
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// decay

struct DecayOptions {
  CommonOptions common;
  GridOptions grid;
  std::string mode = "norms";
  std::string p1 = "1";
  std::string p2 = "1";
  std::optional<std::string> alpha;
  std::string delta = "1/2";
  std::string j_range = "0:8";
  int k_max = 64;
  int trials = 8;
  int hill_steps = 50;
};

int cmd_decay(DecayOptions& o, Run& run) {
  const double alpha = parse_real(require(o.alpha, "alpha"), "alpha");
  const auto js = parse_index_range(o.j_range, "j_range");
  run.command = "decay";
  if (o.mode == "gamma") {
    const double delta = parse_real(o.delta, "delta");
    if (!(delta > 0.0 && delta < alpha)) throw ValidationError("delta", "need 0 < delta < alpha");
    if (o.k_max < 0) throw ValidationError("k_max", "k_max must be >= 0");
    for (std::size_t i = 1; i < js.size(); ++i) {
      if (js[i] != js[i - 1] + 1) throw ValidationError("j_range", "gamma mode needs a contiguous range");
    }
    open_run(run, o.common);
    run.config["mode"] = o.mode;
    run.config["alpha"] = alpha;
    run.config["delta"] = delta;
    run.config["j_range"] = js;
    run.config["k_max"] = o.k_max;
    const auto report = gamma_decay_check(alpha, delta, js.front(), js.back(), o.k_max, BumpFunction{});
    auto os = run.open("gamma_decay.csv");
    os << "j,k,sup_abs,normalized\n";
    for (const auto& r : report.rows) os << r.j << ',' << r.k << ',' << r.sup_abs << ',' << r.normalized << '\n';
    run.summary = {{"constant", report.constant},
                   {"per_j_max", report.per_j_max},
                   {"log2_slope", report.log2_slope},
                   {"growth_flag", report.growth_flag}};
    std::cout << "empirical constant " << to_text(report.constant) << ", log2 slope " << to_text(report.log2_slope)
              << (report.growth_flag ? ", GROWTH" : ", bounded") << '\n';
    run.write_manifest();
    std::cout << "wrote " << run.dir.string() << '\n';
    return kOk;
  }
  if (o.mode != "norms") throw ValidationError("mode", "mode must be norms or gamma");
  if (js.size() < 4) throw ValidationError("j_range", "decay fit needs at least 4 piece indices");
  if (o.trials < 1) throw ValidationError("trials", "trials must be >= 1");
  const std::uint64_t seed = require(o.common.seed, "seed");
  const ExponentPair exps(parse_exponent(o.p1, "p1"), parse_exponent(o.p2, "p2"));
  if (!(alpha > 0.0)) throw ValidationError("alpha", "alpha must be > 0");
  const Grid grid = o.grid.make(256, 32);
  open_run(run, o.common);
  run.config["mode"] = o.mode;
  run.config["grid"] = grid_json(grid);
  run.config["p1"] = exps.p1().str();
  run.config["p2"] = exps.p2().str();
  run.config["alpha"] = alpha;
  run.config["j_range"] = js;
  run.config["trials"] = o.trials;
  run.config["hill_steps"] = o.hill_steps;

  const BumpFunction bump;
  const auto family = [&](int j) {
    const DyadicPiece piece(j, alpha);
    return BilinearOperator(
        [piece, bump](const SampledField& f, const SampledField& g) { return t_j_apply(f, g, piece, bump); });
  };
  SearchOptions search;
  search.hill_steps = o.hill_steps;
  const DecayFit fit = decay_fit(family, exps, grid, js, o.trials, seed, search);
  write_decay_csv(run.file("decay.csv").string(), fit);
  const double threshold = grid.dim() * (exps.p().reciprocal().to_double() - 1.0);
  run.summary = {{"epsilon", fit.epsilon},  {"slope", fit.slope},         {"residual", fit.residual},
                 {"degenerate", fit.degenerate}, {"threshold", threshold}, {"margin", alpha - threshold}};
  for (std::size_t i = 0; i < fit.js.size(); ++i) std::cout << "j=" << fit.js[i] << "  " << to_text(fit.norms[i]) << '\n';
  if (fit.degenerate) {
    std::cout << "degenerate fit: some estimates vanish\n";
  } else {
    std::cout << "fitted epsilon " << to_text(fit.epsilon) << " (residual " << to_text(fit.residual) << ", alpha - "
              << "threshold " << to_text(alpha - threshold) << ")\n";
  }
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// regions

struct RegionsOptions {
  CommonOptions common;
  int n = 2;
  int resolution = 64;
  std::optional<std::string> p1;
  std::optional<std::string> p2;
};

int cmd_regions(RegionsOptions& o, Run& run) {
  if (o.n < 1) throw ValidationError("n", "dimension must be >= 1");
  run.command = "regions";
  if (o.p1 || o.p2) {
    const ExponentPair exps(parse_exponent(require(o.p1, "p1"), "p1"), parse_exponent(require(o.p2, "p2"), "p2"));
    const IndexResult r = smoothness_index(exps, o.n);
    open_run(run, o.common);
    run.config["n"] = o.n;
    run.config["p1"] = exps.p1().str();
    run.config["p2"] = exps.p2().str();
    json sources = json::array();
    for (const auto& s : r.sources) {
      sources.push_back({{"source", to_string(s.source)},
                         {"threshold", s.threshold.str()},
                         {"value", s.threshold.at(o.n).str()}});
    }
    run.summary = {{"label", to_string(r.label)},
                   {"chosen", to_string(r.chosen.source)},
                   {"threshold", r.chosen.threshold.str()},
                   {"value", r.value.str()},
                   {"sources", sources}};
    std::cout << to_string(r.label) << ", threshold " << r.chosen.threshold.str() << " = " << r.value.str() << '\n';
    run.write_manifest();
    std::cout << "wrote " << run.dir.string() << '\n';
    return kOk;
  }
  if (o.resolution < 16) throw ValidationError("resolution", "resolution must be >= 16");
  open_run(run, o.common);
  run.config["n"] = o.n;
  run.config["resolution"] = o.resolution;
  region_grid_export(o.n, o.resolution, run.file("regions.csv").string(), run.file("regions.svg").string(),
                     std::string("brlab ") + BRLAB_VERSION);
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// kernel

struct KernelOptions {
  CommonOptions common;
  std::string check = "closed";
  int n = 1;
  std::optional<std::string> alpha;
  std::optional<double> rho_min;
  std::optional<double> rho_max;
  int points = 20;
  double theta = 0.3;
  std::string R = "2";
  int nodes = 128;
  std::string j_range = "0:6";
  std::string M = "2,3";
  int angles = 7;
};

int cmd_kernel(KernelOptions& o, Run& run) {
  const double alpha = parse_real(require(o.alpha, "alpha"), "alpha");
  if (o.n < 1 || o.n > 2) throw ValidationError("n", "dimension must be 1 or 2");
  if (!(alpha >= 0.0)) throw ValidationError("alpha", "alpha must be >= 0");
  const bool decay = o.check == "decay";
  const double lo = o.rho_min.value_or(decay ? 10.0 : 0.0);
  const double hi = o.rho_max.value_or(decay ? 100.0 : (o.check == "envelope" ? 40.0 : 50.0));
  if (!(hi > lo) || lo < 0.0) throw ValidationError("rho_max", "empty sweep range");
  if (o.points < 1) throw ValidationError("points", "empty sweep range");
  if (o.nodes < 128) throw ValidationError("nodes", "nodes must be >= 128");

  run.command = "kernel";
  const auto rho_at = [&](int i) { return o.points == 1 ? lo : lo + (hi - lo) * i / (o.points - 1); };
  if (o.check == "closed") {
    open_run(run, o.common);
    run.config = {{"check", o.check}, {"n", o.n}, {"alpha", alpha}, {"rho_min", lo}, {"rho_max", hi},
                  {"points", o.points}, {"theta", o.theta}, {"nodes", o.nodes}, {"seed", run.config["seed"]}};
    auto os = run.open("kernel.csv");
    os << "rho,closed,quadrature,abs_diff,accuracy_warning\n";
    double worst = 0.0;
    for (int i = 0; i < o.points; ++i) {
      const auto pt = KernelPoint::polar(o.n, rho_at(i), o.theta);
      const double c = kernel_closed_form(pt, alpha);
      const auto q = kernel_quadrature(pt, alpha, 1.0, o.nodes);
      worst = std::max(worst, std::abs(c - q.value));
      os << pt.rho() << ',' << c << ',' << q.value << ',' << std::abs(c - q.value) << ',' << q.accuracy_warning << '\n';
    }
    run.summary = {{"max_abs_diff", worst}};
    std::cout << "max closed-vs-quadrature discrepancy " << to_text(worst) << '\n';
  } else if (o.check == "dilation") {
    const auto radii = parse_real_list(o.R, "R");
    for (double r : radii) {
      if (!(r > 0.0)) throw ValidationError("R", "radius must be positive");
    }
    open_run(run, o.common);
    run.config = {{"check", o.check}, {"n", o.n}, {"alpha", alpha}, {"rho_min", lo}, {"rho_max", hi},
                  {"points", o.points}, {"theta", o.theta}, {"R", radii}, {"nodes", o.nodes},
                  {"seed", run.config["seed"]}};
    auto os = run.open("dilation.csv");
    os << "rho,R,residual\n";
    double worst = 0.0;
    for (double r : radii) {
      for (int i = 0; i < o.points; ++i) {
        const auto pt = KernelPoint::polar(o.n, rho_at(i), o.theta);
        const double res = dilation_check(pt, alpha, r, o.nodes);
        worst = std::max(worst, res);
        os << pt.rho() << ',' << r << ',' << res << '\n';
      }
    }
    run.summary = {{"max_residual", worst}};
    std::cout << "max dilation residual " << to_text(worst) << '\n';
  } else if (o.check == "envelope") {
    if (!(alpha > 0.0)) throw ValidationError("alpha", "envelope needs alpha > 0");
    if (o.n != 1 && o.n != 2) throw ValidationError("n", "dimension must be 1 or 2");
    const auto js = parse_index_range(o.j_range, "j_range");
    const auto powers = parse_real_list(o.M, "M");
    for (double m : powers) {
      if (!(m > 0.0)) throw ValidationError("M", "envelope power must be positive");
    }
    if (o.angles < 1) throw ValidationError("angles", "angles must be >= 1");
    open_run(run, o.common);
    run.config = {{"check", o.check}, {"n", o.n}, {"alpha", alpha}, {"rho_max", hi}, {"points", o.points},
                  {"angles", o.angles}, {"j_range", js}, {"M", powers}, {"nodes", o.nodes},
                  {"seed", run.config["seed"]}};
    const auto samples = radial_samples(o.n, hi, o.points, o.angles);
    const auto reports = envelope_fit(alpha, js, powers, samples, BumpFunction{}, o.nodes);
    auto os = run.open("envelope.csv");
    os << "M,j,C_j\n";
    json slopes = json::array();
    for (const auto& r : reports) {
      for (std::size_t i = 0; i < r.js.size(); ++i) os << r.power << ',' << r.js[i] << ',' << r.constants[i] << '\n';
      slopes.push_back({{"M", r.power}, {"log2_slope", r.log2_slope}, {"C_j", r.constants}});
      std::cout << "M=" << r.power << "  log2 slope of C_j " << to_text(r.log2_slope) << '\n';
    }
    run.summary = {{"envelopes", slopes}};
  } else if (decay) {
    if (!(lo > 0.0)) throw ValidationError("rho_min", "decay fit needs rho_min > 0");
    open_run(run, o.common);
    run.config = {{"check", o.check}, {"n", o.n}, {"alpha", alpha}, {"rho_min", lo}, {"rho_max", hi},
                  {"seed", run.config["seed"]}};
    const auto fit = kernel_decay_fit(o.n, alpha, lo, hi);
    auto os = run.open("decay.csv");
    os << "n,alpha,exponent,expected,maxima\n";
    os << o.n << ',' << alpha << ',' << fit.exponent << ',' << o.n + alpha + 0.5 << ',' << fit.maxima << '\n';
    run.summary = {{"exponent", fit.exponent}, {"expected", o.n + alpha + 0.5}, {"maxima", fit.maxima}};
    std::cout << "fitted decay exponent " << to_text(fit.exponent) << " (n + alpha + 1/2 = " << o.n + alpha + 0.5
              << ")\n";
  } else {
    throw ValidationError("check", "check must be closed, dilation, envelope or decay");
  }
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// norms

struct NormsOptions {
  CommonOptions common;
  GridOptions grid;
  std::string experiment = "estimate";
  std::string op = "br";
  std::optional<std::string> alpha;
  std::string p1 = "2";
  std::string p2 = "2";
  std::string p = "1";
  double b = 8.0;
  std::string widths = "1/2,1,2,4";
  int trials = 8;
  int hill_steps = 50;
};

int cmd_norms(NormsOptions& o, Run& run) {
  const std::uint64_t seed = require(o.common.seed, "seed");
  SearchOptions search;
  search.hill_steps = o.hill_steps;
  if (o.hill_steps < 0) throw ValidationError("hill_steps", "hill_steps must be >= 0");
  run.command = "norms";
  if (o.experiment == "lemma1") {
    const Exponent p = parse_exponent(o.p, "p");
    const auto widths = parse_real_list(o.widths, "widths");
    const Grid grid = o.grid.make(1024, 64);
    open_run(run, o.common);
    run.config["experiment"] = o.experiment;
    run.config["grid"] = grid_json(grid);
    run.config["p"] = p.str();
    run.config["b"] = o.b;
    run.config["widths"] = widths;
    run.config["hill_steps"] = o.hill_steps;
    const auto report = lemma1_scaling_experiment(p, o.b, widths, grid, seed, search);
    write_scaling_csv(run.file("scaling.csv").string(), report);
    run.summary = {{"predicted", report.predicted}, {"estimates", report.estimates}};
    for (std::size_t i = 0; i < widths.size(); ++i) {
      std::cout << "w=" << to_text(widths[i]) << "  " << to_text(report.estimates[i]) << '\n';
    }
    if (report.fit) {
      run.summary["exponent"] = report.fit->slope;
      run.summary["residual"] = report.fit->residual;
      std::cout << "fitted exponent " << to_text(report.fit->slope) << " (1/p - 1/2 = " << to_text(report.predicted)
                << ")\n";
    } else {
      std::cout << "fewer than 4 widths: no fit\n";
    }
  } else if (o.experiment == "estimate" || o.experiment == "corollary") {
    if (o.trials < 1) throw ValidationError("trials", "trials must be >= 1");
    const Grid grid = o.grid.make(256, 32);
    const bool corollary = o.experiment == "corollary";
    const double alpha = corollary || o.op == "br" ? parse_real(require(o.alpha, "alpha"), "alpha") : 0.0;
    const ExponentPair exps = corollary ? ExponentPair(Exponent(1), Exponent::infinity())
                                        : ExponentPair(parse_exponent(o.p1, "p1"), parse_exponent(o.p2, "p2"));
    BilinearOperator op;
    if (corollary) {
      if (!(alpha > 0.0)) throw ValidationError("alpha", "alpha must be > 0");
    } else if (o.op == "product") {
      op = [](const SampledField& f, const SampledField& g) { return f * g; };
    } else if (o.op == "br") {
      const MultiplierSpec spec{alpha, 1.0};
      spec.validate();
      op = [spec](const SampledField& f, const SampledField& g) { return br_apply_oracle(f, g, spec); };
    } else {
      throw ValidationError("op", "op must be br or product");
    }
    open_run(run, o.common);
    if (!corollary) run.config["op"] = o.op;
    if (corollary || o.op == "br") run.config["alpha"] = alpha;
    run.config["p1"] = exps.p1().str();
    run.config["p2"] = exps.p2().str();
    const NormEstimate est = corollary ? corollary_experiment(alpha, grid, o.trials, seed, search)
                                       : estimate_bilinear_norm(op, exps, grid, o.trials, seed, search);
    run.config["experiment"] = o.experiment;
    run.config["grid"] = grid_json(grid);
    run.config["trials"] = o.trials;
    run.config["hill_steps"] = o.hill_steps;
    write_norm_estimate(run.dir.string(), "estimate", est);
    for (const char* name : {"estimate.json", "estimate_f.bin", "estimate_g.bin"}) run.outputs.push_back(name);
    run.summary = {{"value", est.value}, {"witness_f", est.witness_f_id}, {"witness_g", est.witness_g_id}};
    std::cout << "lower bound " << to_text(est.value) << "  (f: " << est.witness_f_id << ", g: " << est.witness_g_id
              << ")\n";
  } else {
    throw ValidationError("experiment", "experiment must be estimate, lemma1 or corollary");
  }
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// bessel-check

struct BesselOptions {
  CommonOptions common;
  std::string orders = "0,1/2,1,3/2,2,5/2";
  double r_min = 0.01;
  double r_max = 200.0;
  int points = 40;
};

int cmd_bessel(BesselOptions& o, Run& run) {
  std::vector<double> orders = parse_real_list(o.orders, "orders");
  if (!(o.r_min > 0.0) || !(o.r_max > o.r_min)) throw ValidationError("r_max", "need 0 < r_min < r_max");
  if (o.points < 2) throw ValidationError("points", "points must be >= 2");
  for (double k : orders) {
    if (!(k > -0.5)) throw ValidationError("orders", "orders must exceed -1/2");
  }
  run.command = "bessel-check";
  open_run(run, o.common);
  run.config["orders"] = orders;
  run.config["r_min"] = o.r_min;
  run.config["r_max"] = o.r_max;
  run.config["points"] = o.points;
  auto os = run.open("bessel.csv");
  os << "k,r,bessel_j,oracle,abs_diff,accuracy_warning\n";
  double worst = 0.0;
  for (double k : orders) {
    for (int i = 0; i < o.points; ++i) {
      const double r = o.r_min * std::pow(o.r_max / o.r_min, double(i) / (o.points - 1));
      const double a = bessel_j(BesselOrder(k), r);
      const auto b = bessel_j_oracle(BesselOrder(k), r);
      worst = std::max(worst, std::abs(a - b.value));
      os << k << ',' << r << ',' << a << ',' << b.value << ',' << std::abs(a - b.value) << ',' << b.accuracy_warning
         << '\n';
    }
  }
  run.summary = {{"max_abs_diff", worst}};
  std::cout << "max |bessel_j - oracle| " << to_text(worst) << '\n';
  run.write_manifest();
  std::cout << "wrote " << run.dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

int fail(int code, const std::string& kind, const std::string& message, const json& extra = json::object()) {
  json record = {{"error", kind}, {"message", message}};
  record.update(extra);
  std::cerr << record.dump() << '\n';
  if (active_run) {
    try {
      active_run->write_manifest(record);
    } catch (const std::exception&) {
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"brlab: numerical laboratory for bilinear Bochner-Riesz means"};
  app.set_version_flag("--version", BRLAB_VERSION);
  app.require_subcommand(1);

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Apply S^alpha by several paths and compare them");
  add_common(evaluate, ev.common);
  add_grid(evaluate, ev.grid);
  add_field(evaluate, "f", ev.f);
  add_field(evaluate, "g", ev.g);
  evaluate->add_option("--alpha", ev.alpha, "Smoothness index");
  evaluate->add_option("--R", ev.R, "Radius");
  evaluate->add_option("--paths", ev.paths, "Comma list of oracle, radial, kernel, separable");
  evaluate->add_option("--nodes", ev.nodes, "Radial nodes (0: lattice radii)");
  evaluate->add_option("--J", ev.J, "Largest piece index of the separable path");
  evaluate->add_option("--K", ev.K, "Rank cutoff of the separable path");
  evaluate->add_option("--format", ev.format, "Field file format: csv or bin");
  evaluate->add_option("--budget", ev.budget, "Cap on lattice-pair operations");

  DecayOptions de;
  auto* decay = app.add_subcommand("decay", "Decay of the dyadic pieces: norm estimates or gamma coefficients");
  add_common(decay, de.common);
  add_grid(decay, de.grid);
  decay->add_option("--mode", de.mode, "norms or gamma");
  decay->add_option("--p1", de.p1, "Exponent p1 (a/b, integer or inf)");
  decay->add_option("--p2", de.p2, "Exponent p2 (a/b, integer or inf)");
  decay->add_option("--alpha", de.alpha, "Smoothness index");
  decay->add_option("--delta", de.delta, "Decay margin delta in (0, alpha) (gamma mode)");
  decay->add_option("--j-range", de.j_range, "Piece indices, a:b or a list");
  decay->add_option("--k-max", de.k_max, "Largest |k| (gamma mode)");
  decay->add_option("--trials", de.trials, "Hill-climbing starts per piece");
  decay->add_option("--hill-steps", de.hill_steps, "Hill-climbing steps per start");

  RegionsOptions re;
  auto* regions = app.add_subcommand("regions", "Smoothness-index regions: map export or point query");
  add_common(regions, re.common);
  regions->add_option("--n", re.n, "Dimension");
  regions->add_option("--resolution", re.resolution, "Grid nodes per axis minus one");
  regions->add_option("--p1", re.p1, "Query exponent p1");
  regions->add_option("--p2", re.p2, "Query exponent p2");

  KernelOptions ke;
  auto* kernel = app.add_subcommand("kernel", "Kernel sweeps: closed form vs quadrature, dilation, envelope, decay");
  add_common(kernel, ke.common);
  kernel->add_option("--check", ke.check, "closed, dilation, envelope or decay");
  kernel->add_option("--n", ke.n, "Dimension");
  kernel->add_option("--alpha", ke.alpha, "Smoothness index");
  kernel->add_option("--rho-min", ke.rho_min, "Smallest |(x1,x2)|");
  kernel->add_option("--rho-max", ke.rho_max, "Largest |(x1,x2)|");
  kernel->add_option("--points", ke.points, "Radii in the sweep");
  kernel->add_option("--theta", ke.theta, "Polar angle of the sweep points");
  kernel->add_option("--R", ke.R, "Dilation radii, comma list");
  kernel->add_option("--nodes", ke.nodes, "Minimum quadrature nodes per axis");
  kernel->add_option("--j-range", ke.j_range, "Piece indices for the envelope");
  kernel->add_option("--M", ke.M, "Envelope powers, comma list");
  kernel->add_option("--angles", ke.angles, "Angles per radius for the envelope");

  NormsOptions no;
  auto* norms = app.add_subcommand("norms", "Empirical norm lower bounds");
  add_common(norms, no.common);
  add_grid(norms, no.grid);
  norms->add_option("--experiment", no.experiment, "estimate, lemma1 or corollary");
  norms->add_option("--op", no.op, "br or product (estimate)");
  norms->add_option("--alpha", no.alpha, "Smoothness index");
  norms->add_option("--p1", no.p1, "Exponent p1");
  norms->add_option("--p2", no.p2, "Exponent p2");
  norms->add_option("--p", no.p, "Input exponent (lemma1)");
  norms->add_option("--b", no.b, "Band end (lemma1)");
  norms->add_option("--widths", no.widths, "Band widths, comma list (lemma1)");
  norms->add_option("--trials", no.trials, "Hill-climbing starts");
  norms->add_option("--hill-steps", no.hill_steps, "Hill-climbing steps per start");

  BesselOptions be;
  auto* bessel = app.add_subcommand("bessel-check", "Compare bessel_j with the quadrature oracle");
  add_common(bessel, be.common);
  bessel->add_option("--orders", be.orders, "Orders, comma list");
  bessel->add_option("--r-min", be.r_min, "Smallest argument");
  bessel->add_option("--r-max", be.r_max, "Largest argument");
  bessel->add_option("--points", be.points, "Log-spaced arguments per order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kValidation, "validation", e.what(), {{"key", "argv"}});
  }

  Run run;
  try {
    if (*evaluate) return cmd_evaluate(ev, run);
    if (*decay) return cmd_decay(de, run);
    if (*regions) return cmd_regions(re, run);
    if (*kernel) return cmd_kernel(ke, run);
    if (*norms) return cmd_norms(no, run);
    if (*bessel) return cmd_bessel(be, run);
  } catch (const ValidationError& e) {
    return fail(kValidation, "validation", e.what(), {{"key", e.key()}});
  } catch (const DomainError& e) {
    return fail(kValidation, "domain", e.what());
  } catch (const OverflowError& e) {
    return fail(kValidation, "overflow", e.what());
  } catch (const BudgetError& e) {
    return fail(kBudget, "budget", e.what());
  } catch (const IoError& e) {
    return fail(kIo, "io", e.what(), {{"path", e.path()}});
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
  return kInternal;
}
