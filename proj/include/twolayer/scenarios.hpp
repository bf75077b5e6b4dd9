#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twolayer/core.hpp"
#include "twolayer/driver.hpp"
#include "twolayer/eigen.hpp"
#include "twolayer/errors.hpp"
#include "twolayer/frame.hpp"

namespace twolayer {

enum class BathymetryKind { Flat, Step, Gaussian, Ramp };

inline std::string_view to_string(BathymetryKind k) {
  switch (k) {
    case BathymetryKind::Flat: return "flat";
    case BathymetryKind::Step: return "step";
    case BathymetryKind::Gaussian: return "gaussian";
    case BathymetryKind::Ramp: return "ramp";
  }
  return "?";
}

inline BathymetryKind parse_bathymetry(std::string_view s) {
  if (s == "flat") return BathymetryKind::Flat;
  if (s == "step") return BathymetryKind::Step;
  if (s == "gaussian") return BathymetryKind::Gaussian;
  if (s == "ramp") return BathymetryKind::Ramp;
  throw ConfigError("unknown bathymetry '" + std::string(s) + "'");
}

struct BathymetrySpec {
  BathymetryKind kind = BathymetryKind::Flat;
  double level = -1.0;  // flat
  // step: `left` for x < x_step, `right` otherwise
  double left = -1.0;
  double right = -0.2;
  double x_step = 0.5;
  // gaussian: base + amplitude * exp(-(x - center)^2 / width)
  double base = -10.0;
  double amplitude = 5.0;
  double center = 5.0;
  double width = 2.5;
  // ramp: b0 up to x0, linear to b1 at x1, b1 beyond
  double b0 = -1.0;
  double x0 = 0.4;
  double b1 = -0.2;
  double x1 = 0.6;

  double operator()(double x) const {
    switch (kind) {
      case BathymetryKind::Flat: return level;
      case BathymetryKind::Step: return x < x_step ? left : right;
      case BathymetryKind::Gaussian:
        return base + amplitude * std::exp(-(x - center) * (x - center) / width);
      case BathymetryKind::Ramp:
        if (x < x0) return b0;
        if (x >= x1) return b1;
        return b0 + (b0 - b1) / (x0 - x1) * (x - x0);
    }
    return level;
  }

  friend bool operator==(const BathymetrySpec&, const BathymetrySpec&) = default;
};

enum class PerturbationKind { None, SimpleWave, InternalGaussian, Sine };

inline std::string_view to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::None: return "none";
    case PerturbationKind::SimpleWave: return "simple-wave";
    case PerturbationKind::InternalGaussian: return "internal-gaussian";
    case PerturbationKind::Sine: return "sine";
  }
  return "?";
}

inline PerturbationKind parse_perturbation(std::string_view s) {
  if (s == "none") return PerturbationKind::None;
  if (s == "simple-wave") return PerturbationKind::SimpleWave;
  if (s == "internal-gaussian") return PerturbationKind::InternalGaussian;
  if (s == "sine") return PerturbationKind::Sine;
  throw ConfigError("unknown perturbation '" + std::string(s) + "'");
}

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::None;
  // simple wave: epsilon * R[:, family] added left of x0
  int family = 3;
  double epsilon = 0.1;
  double x0 = 0.45;
  // internal gaussian: amplitude * exp(-((x - center) / sigma)^2) on eta2
  double amplitude = 0.2;
  double center = 0.2;
  double sigma = 0.01;
  // sine: epsilon * sin(pi (x - x_mid) / (x_edge - x_mid)) for |x - x_mid| <= |x_edge - x_mid|
  double x_mid = -130.0e3;
  double x_edge = -80.0e3;
  bool both_surfaces = true;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

struct ScenarioSpec {
  std::string name = "custom";
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n = 100;
  BathymetrySpec bathymetry;
  double eta1_hat = 0.0;
  double eta2_hat = -0.6;
  PerturbationSpec perturbation;
  double g = 9.8;
  double rho1 = 950.0;
  double rho2 = 1000.0;
  double dry_tolerance = 1.0e-3;
  double cfl = 0.9;
  double t_final = 1.0;
  int frames = 2;
  BoundaryKind bc_left = BoundaryKind::Extrapolation;
  BoundaryKind bc_right = BoundaryKind::Extrapolation;
  EigenMethod eigen = EigenMethod::LinearizedDynamic;
  InundationMethod inundation = InundationMethod::ZeroDepthEstimate;
  Limiter limiter = Limiter::Minmod;
  std::optional<double> manning_n;

  Parameters parameters() const {
    Parameters p(g, rho1, rho2, dry_tolerance, cfl);
    p.eigen_method = eigen;
    p.inundation_method = inundation;
    p.manning_n = manning_n;
    return p;
  }
  Grid grid() const { return Grid(x_lo, x_hi, n); }
  BoundarySpec boundaries() const { return {bc_left, bc_right}; }
  LinearizedBackground background() const { return {eta1_hat, eta2_hat}; }

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "wave3",       "wave4",       "wb-smooth-wet",      "wb-smooth-dry",
      "wb-jump-wet", "wb-jump-dry", "baroclinic-wetting", "ocean-shelf"};
  return names;
}

/// Simple-wave experiments. `bathymetry_jump` selects the stepped bottom with
/// the dry shelf; without it the bottom is flat at the deep value.
inline ScenarioSpec simple_wave_scenario(int family, bool bathymetry_jump = true) {
  ScenarioSpec s;
  s.name = family == 3 ? "wave3" : "wave4";
  s.x_lo = 0.0;
  s.x_hi = 1.0;
  s.n = 500;
  if (bathymetry_jump) {
    s.bathymetry.kind = BathymetryKind::Step;
    s.bathymetry.left = -1.0;
    s.bathymetry.right = -0.2;
    s.bathymetry.x_step = 0.5;
  } else {
    s.bathymetry.kind = BathymetryKind::Flat;
    s.bathymetry.level = -1.0;
  }
  s.eta1_hat = 0.0;
  s.eta2_hat = -0.6;
  s.rho1 = 950.0;
  s.rho2 = 1000.0;
  s.perturbation.kind = PerturbationKind::SimpleWave;
  s.perturbation.family = family;
  s.perturbation.epsilon = family == 3 ? 0.1 : 0.04;
  s.perturbation.x0 = 0.45;
  s.t_final = family == 3 ? 0.5 : 0.1;
  s.frames = 6;
  return s;
}

inline ScenarioSpec build_scenario(std::string_view name) {
  if (name == "wave3") return simple_wave_scenario(3);
  if (name == "wave4") return simple_wave_scenario(4);

  ScenarioSpec s;
  s.name = std::string(name);
  if (name.starts_with("wb-")) {
    s.x_lo = 0.0;
    s.x_hi = 10.0;
    s.n = 100;
    s.t_final = 10.0;
    s.frames = 2;
    s.eta1_hat = 0.0;
    s.bc_left = s.bc_right = BoundaryKind::Wall;
    s.rho1 = 950.0;
    s.rho2 = 1000.0;
    if (name == "wb-smooth-wet" || name == "wb-smooth-dry") {
      s.bathymetry.kind = BathymetryKind::Gaussian;
      s.bathymetry.base = -10.0;
      s.bathymetry.amplitude = 5.0;
      s.bathymetry.center = 5.0;
      s.bathymetry.width = 2.5;
    } else if (name == "wb-jump-wet" || name == "wb-jump-dry") {
      s.bathymetry.kind = BathymetryKind::Step;
      s.bathymetry.left = -10.0;
      s.bathymetry.right = -5.0;
      s.bathymetry.x_step = 5.0;
    } else {
      throw ConfigError("unknown scenario '" + std::string(name) + "'");
    }
    s.eta2_hat = name.ends_with("-dry") ? -6.0 : -4.0;
    return s;
  }
  if (name == "baroclinic-wetting") {
    s.x_lo = 0.0;
    s.x_hi = 1.0;
    s.n = 128;
    s.bathymetry.kind = BathymetryKind::Ramp;
    s.bathymetry.b0 = -1.0;
    s.bathymetry.x0 = 0.4;
    s.bathymetry.b1 = -0.2;
    s.bathymetry.x1 = 0.6;
    s.eta1_hat = 0.0;
    s.eta2_hat = -0.6;
    s.rho1 = 950.0;
    s.rho2 = 1000.0;
    s.perturbation.kind = PerturbationKind::InternalGaussian;
    s.perturbation.amplitude = 0.2;
    s.perturbation.center = 0.2;
    s.perturbation.sigma = 0.01;
    s.manning_n = 0.022;
    s.eigen = EigenMethod::LinearizedDynamic;
    s.t_final = 3.0;
    s.frames = 7;
    return s;
  }
  if (name == "ocean-shelf") {
    s.x_lo = -400.0e3;
    s.x_hi = 0.0;
    s.n = 2000;
    s.bathymetry.kind = BathymetryKind::Step;
    s.bathymetry.left = -4000.0;
    s.bathymetry.right = -100.0;
    s.bathymetry.x_step = -30.0e3;
    s.eta1_hat = 0.0;
    s.eta2_hat = -300.0;
    s.rho1 = 1025.0;
    s.rho2 = 1045.0;
    s.perturbation.kind = PerturbationKind::Sine;
    s.perturbation.epsilon = 0.4;
    s.perturbation.x_mid = -130.0e3;
    s.perturbation.x_edge = -80.0e3;
    s.perturbation.both_surfaces = true;
    s.bc_left = BoundaryKind::Wall;
    s.bc_right = BoundaryKind::Extrapolation;
    s.eigen = EigenMethod::LinearizedDynamic;
    s.t_final = 3600.0;
    s.frames = 6;
    return s;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// initial conditions

/// Background depths at one cell.
struct BackgroundDepths {
  double h1, h2;
};

inline BackgroundDepths background_depths(const LinearizedBackground& bg, double b) {
  return {bg.h1_hat(b), bg.h2_hat(b)};
}

/// Quiescent background plus epsilon times one linearized eigenvector left of
/// x0. Eigenvector entries are added to (h1, h1 u1, h2, h2 u2).
inline std::vector<CellState> simple_wave_ic(int family, double epsilon, double x0,
                                             const LinearizedBackground& bg,
                                             const BathymetrySpec& bathy, const Grid& grid,
                                             const Parameters& p) {
  if (family != 3 && family != 4) throw ConfigError("simple wave family must be 3 or 4");
  std::vector<CellState> cells(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double b = bathy(x);
    const BackgroundDepths d = background_depths(bg, b);
    double h1 = d.h1, h2 = d.h2, hu1 = 0.0, hu2 = 0.0;
    if (x < x0 && epsilon != 0.0) {
      const EigenBasis basis = linearized_basis(d.h1, d.h2, p);
      const auto col = basis.R.col(family - 1);
      h1 += epsilon * col[0];
      hu1 += epsilon * col[1];
      h2 += epsilon * col[2];
      hu2 += epsilon * col[3];
    }
    if (h1 < 0.0 || h2 < 0.0) throw ConfigError("simple wave perturbation yields a negative depth");
    cells[i] = CellState{p.rho1() * h1, p.rho1() * hu1, p.rho2() * h2, p.rho2() * hu2, b};
  }
  return cells;
}

inline std::vector<CellState> initial_condition(const ScenarioSpec& s) {
  const Parameters p = s.parameters();
  const Grid grid = s.grid();
  const LinearizedBackground bg = s.background();
  const PerturbationSpec& pert = s.perturbation;
  if (pert.kind == PerturbationKind::SimpleWave)
    return simple_wave_ic(pert.family, pert.epsilon, pert.x0, bg, s.bathymetry, grid, p);

  std::vector<CellState> cells(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double b = s.bathymetry(x);
    const BackgroundDepths d = background_depths(bg, b);
    double h1 = d.h1, h2 = d.h2;
    if (pert.kind == PerturbationKind::InternalGaussian && h2 > 0.0) {
      const double z = (x - pert.center) / pert.sigma;
      const double bump = std::min(pert.amplitude * std::exp(-z * z), h1);
      h2 += bump;
      h1 -= bump;
    } else if (pert.kind == PerturbationKind::Sine) {
      const double half = std::abs(pert.x_edge - pert.x_mid);
      if (std::abs(x - pert.x_mid) <= half) {
        const double z =
            pert.epsilon * std::sin(std::numbers::pi * (x - pert.x_mid) / (pert.x_edge - pert.x_mid));
        if (pert.both_surfaces && h2 > 0.0) {
          h2 += z;
        } else {
          h1 += z;
        }
      }
    }
    if (h1 < 0.0 || h2 < 0.0) throw ConfigError("perturbation yields a negative depth");
    cells[i] = CellState{p.rho1() * h1, 0.0, p.rho2() * h2, 0.0, b};
  }
  return cells;
}

inline StepOptions step_options(const ScenarioSpec& s) {
  StepOptions opt;
  opt.limiter = s.limiter;
  if (s.eigen == EigenMethod::LinearizedStatic) {
    const Grid grid = s.grid();
    const LinearizedBackground bg = s.background();
    opt.h1_hat.resize(grid.n_cells);
    opt.h2_hat.resize(grid.n_cells);
    for (int i = 0; i < grid.n_cells; ++i) {
      const BackgroundDepths d = background_depths(bg, s.bathymetry(grid.center(i)));
      opt.h1_hat[i] = d.h1;
      opt.h2_hat[i] = d.h2;
    }
  }
  return opt;
}

// ---------------------------------------------------------------------------
// flat key = value config

inline std::string format_key_values(const ScenarioSpec& s) {
  std::ostringstream os;
  auto put = [&](const char* key, const auto& v) { os << key << " = " << v << '\n'; };
  auto num = [&](const char* key, double v) { put(key, format_double(v)); };
  put("name", s.name);
  num("x_lo", s.x_lo);
  num("x_hi", s.x_hi);
  put("n", s.n);
  put("bathymetry", to_string(s.bathymetry.kind));
  num("bathymetry.level", s.bathymetry.level);
  num("bathymetry.left", s.bathymetry.left);
  num("bathymetry.right", s.bathymetry.right);
  num("bathymetry.x_step", s.bathymetry.x_step);
  num("bathymetry.base", s.bathymetry.base);
  num("bathymetry.amplitude", s.bathymetry.amplitude);
  num("bathymetry.center", s.bathymetry.center);
  num("bathymetry.width", s.bathymetry.width);
  num("bathymetry.b0", s.bathymetry.b0);
  num("bathymetry.x0", s.bathymetry.x0);
  num("bathymetry.b1", s.bathymetry.b1);
  num("bathymetry.x1", s.bathymetry.x1);
  num("eta1_hat", s.eta1_hat);
  num("eta2_hat", s.eta2_hat);
  put("perturbation", to_string(s.perturbation.kind));
  put("perturbation.family", s.perturbation.family);
  num("perturbation.epsilon", s.perturbation.epsilon);
  num("perturbation.x0", s.perturbation.x0);
  num("perturbation.amplitude", s.perturbation.amplitude);
  num("perturbation.center", s.perturbation.center);
  num("perturbation.sigma", s.perturbation.sigma);
  num("perturbation.x_mid", s.perturbation.x_mid);
  num("perturbation.x_edge", s.perturbation.x_edge);
  put("perturbation.both_surfaces", s.perturbation.both_surfaces ? "true" : "false");
  num("g", s.g);
  num("rho1", s.rho1);
  num("rho2", s.rho2);
  num("dry_tolerance", s.dry_tolerance);
  num("cfl", s.cfl);
  num("t_final", s.t_final);
  put("frames", s.frames);
  put("bc_left", to_string(s.bc_left));
  put("bc_right", to_string(s.bc_right));
  put("eigen", to_string(s.eigen));
  put("inundation", to_string(s.inundation));
  put("limiter", to_string(s.limiter));
  put("manning_n", s.manning_n ? format_double(*s.manning_n) : std::string("none"));
  return os.str();
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string v) {
    const auto a = v.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = v.find_last_not_of(" \t\r");
    return v.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace detail {

inline double parse_number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
  if (used != v.size()) throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return d;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_number(key, v);
  if (d != std::floor(d)) throw ConfigError("config key '" + key + "': not an integer");
  return static_cast<int>(d);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': not a boolean");
}

}  // namespace detail

/// Applies overrides onto a spec. A `scenario` key (if present) is expected to
/// have been consumed by the caller to choose the base spec.
inline void apply_key_values(ScenarioSpec& s, const std::map<std::string, std::string>& kv) {
  using detail::parse_bool;
  using detail::parse_int;
  using detail::parse_number;
  for (const auto& [k, v] : kv) {
    if (k == "scenario") continue;
    else if (k == "name") s.name = v;
    else if (k == "x_lo") s.x_lo = parse_number(k, v);
    else if (k == "x_hi") s.x_hi = parse_number(k, v);
    else if (k == "n") s.n = parse_int(k, v);
    else if (k == "bathymetry") s.bathymetry.kind = parse_bathymetry(v);
    else if (k == "bathymetry.level") s.bathymetry.level = parse_number(k, v);
    else if (k == "bathymetry.left") s.bathymetry.left = parse_number(k, v);
    else if (k == "bathymetry.right") s.bathymetry.right = parse_number(k, v);
    else if (k == "bathymetry.x_step") s.bathymetry.x_step = parse_number(k, v);
    else if (k == "bathymetry.base") s.bathymetry.base = parse_number(k, v);
    else if (k == "bathymetry.amplitude") s.bathymetry.amplitude = parse_number(k, v);
    else if (k == "bathymetry.center") s.bathymetry.center = parse_number(k, v);
    else if (k == "bathymetry.width") s.bathymetry.width = parse_number(k, v);
    else if (k == "bathymetry.b0") s.bathymetry.b0 = parse_number(k, v);
    else if (k == "bathymetry.x0") s.bathymetry.x0 = parse_number(k, v);
    else if (k == "bathymetry.b1") s.bathymetry.b1 = parse_number(k, v);
    else if (k == "bathymetry.x1") s.bathymetry.x1 = parse_number(k, v);
    else if (k == "eta1_hat") s.eta1_hat = parse_number(k, v);
    else if (k == "eta2_hat") s.eta2_hat = parse_number(k, v);
    else if (k == "perturbation") s.perturbation.kind = parse_perturbation(v);
    else if (k == "perturbation.family") s.perturbation.family = parse_int(k, v);
    else if (k == "perturbation.epsilon") s.perturbation.epsilon = parse_number(k, v);
    else if (k == "perturbation.x0") s.perturbation.x0 = parse_number(k, v);
    else if (k == "perturbation.amplitude") s.perturbation.amplitude = parse_number(k, v);
    else if (k == "perturbation.center") s.perturbation.center = parse_number(k, v);
    else if (k == "perturbation.sigma") s.perturbation.sigma = parse_number(k, v);
    else if (k == "perturbation.x_mid") s.perturbation.x_mid = parse_number(k, v);
    else if (k == "perturbation.x_edge") s.perturbation.x_edge = parse_number(k, v);
    else if (k == "perturbation.both_surfaces") s.perturbation.both_surfaces = parse_bool(k, v);
    else if (k == "g") s.g = parse_number(k, v);
    else if (k == "rho1") s.rho1 = parse_number(k, v);
    else if (k == "rho2") s.rho2 = parse_number(k, v);
    else if (k == "dry_tolerance") s.dry_tolerance = parse_number(k, v);
    else if (k == "cfl") s.cfl = parse_number(k, v);
    else if (k == "t_final") s.t_final = parse_number(k, v);
    else if (k == "frames") s.frames = parse_int(k, v);
    else if (k == "bc_left") s.bc_left = parse_boundary(v);
    else if (k == "bc_right") s.bc_right = parse_boundary(v);
    else if (k == "eigen") s.eigen = parse_eigen_method(v);
    else if (k == "inundation") s.inundation = parse_inundation_method(v);
    else if (k == "limiter") s.limiter = parse_limiter(v);
    else if (k == "manning_n") {
      if (v == "none") s.manning_n.reset();
      else s.manning_n = parse_number(k, v);
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
}

/// Checks everything a run needs; throws ConfigError on the first problem.
inline void validate(const ScenarioSpec& s) {
  (void)s.parameters();
  (void)s.grid();
  if (!(s.t_final >= 0.0)) throw ConfigError("t_final must be non-negative");
  if (s.frames < 1) throw ConfigError("frames must be >= 1");
  if (s.perturbation.kind == PerturbationKind::SimpleWave && s.perturbation.family != 3 &&
      s.perturbation.family != 4)
    throw ConfigError("simple wave family must be 3 or 4");
  if (s.perturbation.kind == PerturbationKind::InternalGaussian && !(s.perturbation.sigma > 0.0))
    throw ConfigError("gaussian sigma must be positive");
}

inline ScenarioSpec parse_scenario(std::istream& is) {
  const auto kv = parse_key_values(is);
  ScenarioSpec s;
  if (auto it = kv.find("scenario"); it != kv.end()) s = build_scenario(it->second);
  apply_key_values(s, kv);
  return s;
}

// ---------------------------------------------------------------------------
// running

struct RunResult {
  std::vector<SolutionFrame> frames;
  SimState final_state;
  std::array<double, 2> initial_mass{0.0, 0.0};
  double wall_seconds = 0.0;
};

/// Output times: the final time alone for one frame, otherwise evenly spaced
/// from the initial state to the final time.
inline std::vector<double> output_times(double t_final, int frames) {
  std::vector<double> t;
  if (frames <= 1) return {t_final};
  for (int j = 0; j < frames; ++j) t.push_back(t_final * j / (frames - 1));
  return t;
}

inline RunResult run_scenario(const ScenarioSpec& spec,
                              const std::function<void(const SolutionFrame&)>& on_frame = {}) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  const Parameters p = spec.parameters();
  const Grid grid = spec.grid();
  const BoundarySpec bc = spec.boundaries();
  const StepOptions opt = step_options(spec);
  RunResult out;
  out.final_state = make_state(grid, initial_condition(spec));
  SimState& s = out.final_state;
  out.initial_mass = total_mass(s, grid);
  for (double t_out : output_times(spec.t_final, spec.frames)) {
    advance_to(s, t_out, p, grid, bc, opt);
    out.frames.push_back(make_frame(s, grid, p));
    if (on_frame) on_frame(out.frames.back());
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Initial-condition frame, exact for quiescent scenarios.
inline SolutionFrame initial_frame(const ScenarioSpec& spec) {
  const Grid grid = spec.grid();
  SimState s = make_state(grid, initial_condition(spec));
  return make_frame(s, grid, spec.parameters());
}

// ---------------------------------------------------------------------------
// error norms and convergence

inline const std::vector<std::string>& error_fields() {
  static const std::vector<std::string> f = {"h1",   "hu1",  "h2", "hu2",
                                             "eta1", "eta2", "u1", "u2"};
  return f;
}

struct FieldError {
  std::string field;
  double l1 = 0.0;
  double linf = 0.0;
};

struct ErrorReport {
  std::size_t n = 0;
  std::vector<FieldError> fields;

  const FieldError& get(std::string_view name) const {
    for (const auto& f : fields)
      if (f.field == name) return f;
    throw ConfigError("no error recorded for field '" + std::string(name) + "'");
  }
};

/// L1 (dx-weighted) and Linf errors per field. A finer reference is first
/// restricted to the computed grid by cell averaging.
inline ErrorReport error_norms(const SolutionFrame& computed, const SolutionFrame& reference,
                               const Parameters& p) {
  const double len = computed.x_hi - computed.x_lo;
  if (std::abs(reference.x_lo - computed.x_lo) > 1e-9 * len ||
      std::abs(reference.x_hi - computed.x_hi) > 1e-9 * len)
    throw ConfigError("error_norms: frames cover different intervals");
  SolutionFrame restricted;
  const SolutionFrame* ref = &reference;
  if (reference.size() != computed.size()) {
    if (reference.size() < computed.size())
      throw ConfigError("error_norms: reference is coarser than the computed frame");
    restricted = restrict_frame(reference, computed.size(), p);
    ref = &restricted;
  }
  ErrorReport rep;
  rep.n = computed.size();
  const double dx = computed.dx();
  for (const std::string& name : error_fields()) {
    const auto& a = *computed.column(name);
    const auto& b = *ref->column(name);
    FieldError e{name, 0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::abs(a[i] - b[i]);
      e.l1 += d;
      e.linf = std::max(e.linf, d);
    }
    e.l1 *= dx;
    rep.fields.push_back(e);
  }
  return rep;
}

/// Negative least-squares slope of log(error) against log(N).
inline double convergence_order(const std::vector<std::pair<int, double>>& samples) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, err] : samples) {
    if (!(err > 0.0) || n <= 0) {
      std::cerr << "warning: dropping non-positive error sample at N=" << n << '\n';
      continue;
    }
    pts.emplace_back(std::log(static_cast<double>(n)), std::log(err));
  }
  if (pts.size() < 3) throw ConfigError("convergence order needs at least 3 positive samples");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) mx += x, my += y;
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return -sxy / sxx;
}

}  // namespace twolayer
