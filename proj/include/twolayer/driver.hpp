#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "twolayer/core.hpp"
#include "twolayer/errors.hpp"
#include "twolayer/riemann.hpp"

namespace twolayer {

struct Grid {
  static constexpr int n_ghost = 2;

  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_cells = 100;

  Grid() = default;
  Grid(double lo, double hi, int n) : x_lo(lo), x_hi(hi), n_cells(n) {
    if (n < 4) throw ConfigError("grid needs at least 4 cells");
    if (!(hi > lo)) throw ConfigError("grid upper bound must exceed lower bound");
  }

  double dx() const noexcept { return (x_hi - x_lo) / n_cells; }
  double center(int i) const noexcept { return x_lo + (i + 0.5) * dx(); }
  int total_cells() const noexcept { return n_cells + 2 * n_ghost; }
};

enum class BoundaryKind { Wall, Extrapolation };

inline std::string_view to_string(BoundaryKind k) {
  return k == BoundaryKind::Wall ? "wall" : "extrapolation";
}

inline BoundaryKind parse_boundary(std::string_view s) {
  if (s == "wall") return BoundaryKind::Wall;
  if (s == "extrapolation" || s == "extrap") return BoundaryKind::Extrapolation;
  throw ConfigError("unknown boundary condition '" + std::string(s) + "'");
}

struct BoundarySpec {
  BoundaryKind left = BoundaryKind::Extrapolation;
  BoundaryKind right = BoundaryKind::Extrapolation;
};

enum class Limiter { None, Minmod, MC };

inline std::string_view to_string(Limiter l) {
  switch (l) {
    case Limiter::None: return "none";
    case Limiter::Minmod: return "minmod";
    case Limiter::MC: return "mc";
  }
  return "?";
}

inline Limiter parse_limiter(std::string_view s) {
  if (s == "none") return Limiter::None;
  if (s == "minmod") return Limiter::Minmod;
  if (s == "mc") return Limiter::MC;
  throw ConfigError("unknown limiter '" + std::string(s) + "'");
}

inline double limiter_phi(Limiter l, double theta) {
  switch (l) {
    case Limiter::None: return 0.0;
    case Limiter::Minmod: return std::max(0.0, std::min(1.0, theta));
    case Limiter::MC:
      return std::max(0.0, std::min({0.5 * (1.0 + theta), 2.0, 2.0 * theta}));
  }
  return 0.0;
}

struct Diagnostics {
  long steps = 0;
  long rejected_steps = 0;
  double max_cfl = 0.0;
  /// Mass added by clipping round-off negative depths, per layer (kg/m^2 * m).
  std::array<double, 2> clipped_mass{0.0, 0.0};
  /// Net mass that entered through the domain boundaries, per layer.
  std::array<double, 2> boundary_inflow{0.0, 0.0};
};

/// Cells include two ghost layers on each side; interior cell i is cells[i + 2].
struct SimState {
  std::vector<CellState> cells;
  double t = 0.0;
  double dt_last = 0.0;
  Diagnostics diag;

  CellState& interior(int i) { return cells[i + Grid::n_ghost]; }
  const CellState& interior(int i) const { return cells[i + Grid::n_ghost]; }
};

inline SimState make_state(const Grid& grid, const std::vector<CellState>& interior) {
  if (static_cast<int>(interior.size()) != grid.n_cells)
    throw ConfigError("initial condition size does not match the grid");
  SimState s;
  s.cells.assign(grid.total_cells(), CellState{});
  std::copy(interior.begin(), interior.end(), s.cells.begin() + Grid::n_ghost);
  return s;
}

inline constexpr double kRoundOff = 1.0e-12;

struct StepOptions {
  Limiter limiter = Limiter::Minmod;
  double dt_max = std::numeric_limits<double>::infinity();
  /// Halvings allowed when an update would drive a layer depth negative.
  int max_positivity_retries = 30;
  /// Frozen background depths per interior cell for the static linearization.
  std::vector<double> h1_hat;
  std::vector<double> h2_hat;
};

inline void fill_ghosts(SimState& s, const Grid& grid, const BoundarySpec& bc) {
  const int g = Grid::n_ghost;
  const int n = grid.n_cells;
  for (int k = 0; k < g; ++k) {
    CellState& lo = s.cells[g - 1 - k];
    lo = s.cells[bc.left == BoundaryKind::Wall ? g + k : g];
    if (bc.left == BoundaryKind::Wall) {
      lo.mu1 = -lo.mu1;
      lo.mu2 = -lo.mu2;
    }
    CellState& hi = s.cells[g + n + k];
    hi = s.cells[bc.right == BoundaryKind::Wall ? g + n - 1 - k : g + n - 1];
    if (bc.right == BoundaryKind::Wall) {
      hi.mu1 = -hi.mu1;
      hi.mu2 = -hi.mu2;
    }
  }
}

/// dt = cfl * dx / max|s|, capped at dt_max (also used when nothing moves).
inline double compute_dt(double max_speed, const Parameters& p, const Grid& grid,
                         double dt_max = std::numeric_limits<double>::infinity()) {
  if (!(max_speed > 0.0)) {
    if (!std::isfinite(dt_max)) throw ConfigError("no wave speed and no dt_max configured");
    return dt_max;
  }
  return std::min(p.cfl_target() * grid.dx() / max_speed, dt_max);
}

/// Whether the limited correction may be applied at an interface.
inline bool corrections_allowed(const RiemannSolution& sol, const CellState& left,
                                const CellState& right, const Parameters& p) {
  if (sol.config != DryConfig::FullyWet) return false;
  const double h2_bar = 0.5 * (left.m2 + right.m2) / p.rho2();
  return std::abs(right.b - left.b) <= h2_bar;
}

/// Second-order correction fluxes for interfaces 1..size-2 of `sols`
/// (entries 0 and size-1 only feed the limiter). `allowed[k]` switches the
/// correction off at interface k.
inline std::vector<Vector4> correction_fluxes(const std::vector<RiemannSolution>& sols,
                                              const std::vector<char>& allowed, double dt,
                                              double dx, Limiter limiter) {
  std::vector<Vector4> flux(sols.size(), Vector4::Zero());
  if (limiter == Limiter::None) return flux;
  const double ratio = dt / dx;
  for (std::size_t k = 1; k + 1 < sols.size(); ++k) {
    if (!allowed[k]) continue;
    Vector4 f = Vector4::Zero();
    for (int w = 0; w < 4; ++w) {
      const double s = sols[k].speeds[w];
      if (s == 0.0) continue;
      const Vector4& z = sols[k].fwaves[w];
      const double zz = z.squaredNorm();
      if (zz == 0.0) continue;
      const Vector4& up = s > 0.0 ? sols[k - 1].fwaves[w] : sols[k + 1].fwaves[w];
      const double theta = up.dot(z) / zz;
      const double phi = limiter_phi(limiter, theta);
      f += (std::copysign(1.0, s) * (1.0 - ratio * std::abs(s)) * phi) * z;
    }
    flux[k] = 0.5 * f;
  }
  return flux;
}

/// Implicit Manning drag on the lowest wet layer of every interior cell.
inline void apply_friction(SimState& s, const Grid& grid, double dt, const Parameters& p) {
  if (!p.manning_n || *p.manning_n == 0.0) return;
  const double n2 = *p.manning_n * *p.manning_n;
  for (int i = 0; i < grid.n_cells; ++i) {
    CellState& q = s.interior(i);
    const double h2 = q.m2 / p.rho2();
    const double h1 = q.m1 / p.rho1();
    double* mu = nullptr;
    double m = 0.0, h = 0.0;
    if (is_wet(h2, p)) {
      mu = &q.mu2, m = q.m2, h = h2;
    } else if (is_wet(h1, p)) {
      mu = &q.mu1, m = q.m1, h = h1;
    } else {
      continue;
    }
    const double u = *mu / m;
    *mu /= 1.0 + dt * p.g() * n2 * std::abs(u) / std::pow(h, 4.0 / 3.0);
  }
}

/// Zeroes sub-tolerance momentum and clips round-off negative depths. Returns
/// the mass added by clipping per layer; a negative depth beyond the dry
/// tolerance is a solver failure.
inline std::array<double, 2> positivity_guard(SimState& s, const Grid& grid,
                                              const Parameters& p) {
  std::array<double, 2> clipped{0.0, 0.0};
  for (int i = 0; i < grid.n_cells; ++i) {
    CellState& q = s.interior(i);
    for (int layer = 1; layer <= 2; ++layer) {
      double& m = layer == 1 ? q.m1 : q.m2;
      double& mu = layer == 1 ? q.mu1 : q.mu2;
      const double h = m / p.rho(layer);
      if (h < 0.0) {
        if (-h > p.dry_tolerance()) {
          std::ostringstream msg;
          msg << "layer " << layer << " depth " << h << " in cell " << i << " (x="
              << grid.center(i) << ")";
          throw SolverError(SolverErrorKind::NegativeDepth, msg.str());
        }
        clipped[layer - 1] += -m * grid.dx();
        m = 0.0;
      }
      if (m / p.rho(layer) < p.dry_tolerance()) mu = 0.0;
    }
  }
  return clipped;
}

/// Mass flux of each layer as carried by the flux jump.
inline std::array<double, 2> mass_flux(const CellState& q, const Parameters& p) {
  const PrimitiveState s = to_primitive(q, p);
  return {p.rho1() * s.hu1(), p.rho2() * s.hu2()};
}

struct InterfaceSweep {
  std::vector<RiemannSolution> sols;
  std::vector<char> allowed;
  double max_speed = 0.0;
};

/// Solves interfaces 1..total-1 (interface k sits between cells k-1 and k).
/// The returned vectors are indexed by k - 1.
inline InterfaceSweep solve_interfaces(const SimState& s, const Grid& grid, const Parameters& p,
                                       const StepOptions& opt) {
  InterfaceSweep sweep;
  const int total = grid.total_cells();
  sweep.sols.resize(total - 1);
  sweep.allowed.assign(total - 1, 0);
  const bool use_static = p.eigen_method == EigenMethod::LinearizedStatic && !opt.h1_hat.empty();
  auto hat = [&](const std::vector<double>& v, int cell) {
    const int i = std::clamp(cell - Grid::n_ghost, 0, grid.n_cells - 1);
    return v[i];
  };
  for (int k = 1; k < total; ++k) {
    const CellState& L = s.cells[k - 1];
    const CellState& R = s.cells[k];
    std::optional<StaticDepths> bg;
    if (use_static) bg = StaticDepths{hat(opt.h1_hat, k - 1), hat(opt.h2_hat, k - 1),
                                      hat(opt.h1_hat, k), hat(opt.h2_hat, k)};
    try {
      sweep.sols[k - 1] = solve_interface(L, R, p, bg);
    } catch (const SolverError& e) {
      const PrimitiveState a = to_primitive(L, p), b = to_primitive(R, p);
      std::ostringstream msg;
      msg << e.what() << " at interface x=" << grid.x_lo + (k - Grid::n_ghost) * grid.dx()
          << " (t=" << s.t << "); left h1=" << a.h1 << " u1=" << a.u1 << " h2=" << a.h2
          << " u2=" << a.u2 << " b=" << a.b << "; right h1=" << b.h1 << " u1=" << b.u1
          << " h2=" << b.h2 << " u2=" << b.u2 << " b=" << b.b;
      throw SolverError(e.kind(), msg.str());
    }
    sweep.allowed[k - 1] = corrections_allowed(sweep.sols[k - 1], L, R, p) ? 1 : 0;
    // speeds at the outermost interfaces only feed the limiter
    if (k >= Grid::n_ghost && k <= grid.n_cells + Grid::n_ghost)
      sweep.max_speed = std::max(sweep.max_speed, sweep.sols[k - 1].max_speed());
  }
  return sweep;
}

struct StepReport {
  double dt = 0.0;
  double cfl = 0.0;
  int retries = 0;
};

/// Advances one step of at most `dt_limit`: ghosts, interface solves,
/// fluctuation update, limited corrections, positivity guard, friction.
inline StepReport step(SimState& s, const Parameters& p, const Grid& grid,
                       const BoundarySpec& bc, const StepOptions& opt,
                       double dt_limit = std::numeric_limits<double>::infinity()) {
  fill_ghosts(s, grid, bc);
  const InterfaceSweep sweep = solve_interfaces(s, grid, p, opt);
  const double dx = grid.dx();

  StepReport rep;
  double dt = std::min(compute_dt(sweep.max_speed, p, grid, opt.dt_max), dt_limit);
  while (dt * sweep.max_speed / dx > 1.0) {
    dt *= 0.5;
    ++rep.retries;
  }

  const int g = Grid::n_ghost;
  const int n = grid.n_cells;
  std::vector<Vector4> corr;
  std::vector<CellState> next;
  // the interface solutions do not depend on dt, so a rejected step only
  // redoes the update
  for (int attempt = 0;; ++attempt) {
    corr = correction_fluxes(sweep.sols, sweep.allowed, dt, dx, opt.limiter);
    const double ratio = dt / dx;
    next.assign(s.cells.begin() + g, s.cells.begin() + g + n);
    bool negative = false;
    for (int i = 0; i < n; ++i) {
      // cell g+i has interfaces g+i (left) and g+i+1 (right), stored at index-1
      const RiemannSolution& left = sweep.sols[g + i - 1];
      const RiemannSolution& right = sweep.sols[g + i];
      const Vector4 du = -ratio * (left.apdq + right.amdq) -
                         ratio * (corr[g + i] - corr[g + i - 1]);
      CellState& q = next[i];
      const CellState& old = s.cells[g + i];
      q.m1 += du[0];
      q.mu1 += du[1];
      q.m2 += du[2];
      q.mu2 += du[3];
      // a wet layer must not be emptied past zero; round-off sized
      // undershoots are left to the positivity guard
      const double wet1 = p.rho1() * p.dry_tolerance();
      const double wet2 = p.rho2() * p.dry_tolerance();
      negative = negative || (old.m1 >= wet1 && q.m1 < -kRoundOff * old.m1) ||
                 (old.m2 >= wet2 && q.m2 < -kRoundOff * old.m2);
    }
    if (!negative || attempt >= opt.max_positivity_retries) break;
    dt *= 0.5;
    ++rep.retries;
  }
  rep.dt = dt;
  rep.cfl = dt * sweep.max_speed / dx;

  // boundary mass fluxes, numerical flux = f(Q_inner) -/+ inner-side fluctuation
  {
    const RiemannSolution& lo = sweep.sols[g - 1];
    const RiemannSolution& hi = sweep.sols[g + n - 1];
    const auto f_lo = mass_flux(s.cells[g], p);
    const auto f_hi = mass_flux(s.cells[g + n - 1], p);
    const double F_lo1 = f_lo[0] - lo.apdq[0] + corr[g - 1][0];
    const double F_lo2 = f_lo[1] - lo.apdq[2] + corr[g - 1][2];
    const double F_hi1 = f_hi[0] + hi.amdq[0] + corr[g + n - 1][0];
    const double F_hi2 = f_hi[1] + hi.amdq[2] + corr[g + n - 1][2];
    s.diag.boundary_inflow[0] += dt * (F_lo1 - F_hi1);
    s.diag.boundary_inflow[1] += dt * (F_lo2 - F_hi2);
  }

  std::copy(next.begin(), next.end(), s.cells.begin() + g);
  const auto clipped = positivity_guard(s, grid, p);
  s.diag.clipped_mass[0] += clipped[0];
  s.diag.clipped_mass[1] += clipped[1];
  apply_friction(s, grid, dt, p);

  s.t += dt;
  s.dt_last = dt;
  ++s.diag.steps;
  s.diag.rejected_steps += rep.retries;
  s.diag.max_cfl = std::max(s.diag.max_cfl, rep.cfl);
  return rep;
}

/// Total layer masses over the interior (density * depth * dx).
inline std::array<double, 2> total_mass(const SimState& s, const Grid& grid) {
  std::array<double, 2> m{0.0, 0.0};
  for (int i = 0; i < grid.n_cells; ++i) {
    m[0] += s.interior(i).m1;
    m[1] += s.interior(i).m2;
  }
  m[0] *= grid.dx();
  m[1] *= grid.dx();
  return m;
}

/// Steps until `t_target`, landing on it exactly.
inline void advance_to(SimState& s, double t_target, const Parameters& p, const Grid& grid,
                       const BoundarySpec& bc, const StepOptions& opt) {
  while (s.t < t_target) {
    const double remaining = t_target - s.t;
    step(s, p, grid, bc, opt, remaining);
    if (t_target - s.t <= 1e-12 * std::max(1.0, std::abs(t_target))) s.t = t_target;
  }
}

}  // namespace twolayer
