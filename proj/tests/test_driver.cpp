#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace twolayer;
using twolayer::testing::cell;
using twolayer::testing::default_params;

namespace {

SimState at_rest_lake(const Grid& grid, const Parameters& p, double eta2,
                      double (*bathy)(double)) {
  std::vector<CellState> cells;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double b = bathy(grid.center(i));
    const double h2 = std::max(eta2 - b, 0.0);
    const double h1 = 0.0 - std::max(eta2, b);
    cells.push_back(cell(h1, 0, h2, 0, b, p));
  }
  return make_state(grid, cells);
}

double bumpy(double x) { return -1.0 + 0.8 * std::exp(-25.0 * (x - 0.5) * (x - 0.5)); }
double stepped(double x) { return x < 0.5 ? -1.0 : -0.2; }

}  // namespace

TEST(Grid, Invariants) {
  EXPECT_THROW(Grid(0, 1, 3), ConfigError);
  EXPECT_THROW(Grid(1, 1, 10), ConfigError);
  const Grid g(0, 1, 500);
  EXPECT_DOUBLE_EQ(g.dx(), 0.002);
  EXPECT_DOUBLE_EQ(g.center(0), 0.001);
  EXPECT_EQ(g.total_cells(), 504);
}

TEST(Boundaries, WallReflectsExtrapolationCopies) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 4);
  std::vector<CellState> cells;
  for (int i = 0; i < 4; ++i) cells.push_back(cell(1.0 + i, 0.1 * (i + 1), 0.5, 0.2, -2, p));
  SimState s = make_state(grid, cells);
  fill_ghosts(s, grid, {BoundaryKind::Wall, BoundaryKind::Extrapolation});
  EXPECT_EQ(s.cells[1].m1, cells[0].m1);
  EXPECT_EQ(s.cells[1].mu1, -cells[0].mu1);
  EXPECT_EQ(s.cells[0].m1, cells[1].m1);
  EXPECT_EQ(s.cells[0].mu2, -cells[1].mu2);
  EXPECT_EQ(s.cells[6], cells[3]);
  EXPECT_EQ(s.cells[7], cells[3]);
}

TEST(Boundaries, Parse) {
  EXPECT_EQ(parse_boundary("wall"), BoundaryKind::Wall);
  EXPECT_EQ(parse_boundary("extrap"), BoundaryKind::Extrapolation);
  EXPECT_THROW(parse_boundary("periodic"), ConfigError);
}

TEST(TimeStep, CflExample) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 500);
  EXPECT_NEAR(compute_dt(std::sqrt(9.8), p, grid), 5.7498890849994592e-4, 1e-18);
  EXPECT_DOUBLE_EQ(compute_dt(2 * std::sqrt(9.8), p, grid), 0.5 * compute_dt(std::sqrt(9.8), p, grid));
  EXPECT_DOUBLE_EQ(compute_dt(1.0, p, grid, 1e-5), 1e-5);
  EXPECT_THROW(compute_dt(0.0, p, grid), ConfigError);
}

TEST(TimeStep, QuiescentStateHasPositiveDt) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 50);
  SimState s = at_rest_lake(grid, p, -0.6, bumpy);
  fill_ghosts(s, grid, {BoundaryKind::Wall, BoundaryKind::Wall});
  const InterfaceSweep sweep = solve_interfaces(s, grid, p, StepOptions{});
  const double dt = compute_dt(sweep.max_speed, p, grid);
  EXPECT_GT(dt, 0.0);
  EXPECT_TRUE(std::isfinite(dt));
}

TEST(Limiter, Values) {
  EXPECT_EQ(limiter_phi(Limiter::None, 1.0), 0.0);
  EXPECT_EQ(limiter_phi(Limiter::Minmod, -1.0), 0.0);
  EXPECT_EQ(limiter_phi(Limiter::Minmod, 0.4), 0.4);
  EXPECT_EQ(limiter_phi(Limiter::Minmod, 3.0), 1.0);
  EXPECT_EQ(limiter_phi(Limiter::MC, 1.0), 1.0);
  EXPECT_EQ(limiter_phi(Limiter::MC, 0.2), 0.4);
  EXPECT_EQ(limiter_phi(Limiter::MC, 5.0), 2.0);
  EXPECT_EQ(parse_limiter("mc"), Limiter::MC);
  EXPECT_THROW(parse_limiter("superbee"), ConfigError);
}

TEST(Step, NoLimiterIsFirstOrderUpdate) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 20);
  std::vector<CellState> cells;
  for (int i = 0; i < grid.n_cells; ++i)
    cells.push_back(cell(0.6 + 0.05 * std::sin(i), 0.01 * i, 0.4, -0.02, -1.0, p));
  SimState s = make_state(grid, cells);
  const BoundarySpec bc{BoundaryKind::Wall, BoundaryKind::Wall};
  StepOptions opt;
  opt.limiter = Limiter::None;
  SimState manual = s;
  fill_ghosts(manual, grid, bc);
  const InterfaceSweep sweep = solve_interfaces(manual, grid, p, opt);
  const StepReport rep = step(s, p, grid, bc, opt);
  const double r = rep.dt / grid.dx();
  for (int i = 0; i < grid.n_cells; ++i) {
    const int c = i + Grid::n_ghost;
    const Vector4 du = -r * (sweep.sols[c - 1].apdq + sweep.sols[c].amdq);
    const CellState& q = manual.cells[c];
    EXPECT_DOUBLE_EQ(s.interior(i).m1, q.m1 + du[0]);
    EXPECT_DOUBLE_EQ(s.interior(i).mu1, q.mu1 + du[1]);
    EXPECT_DOUBLE_EQ(s.interior(i).m2, q.m2 + du[2]);
    EXPECT_DOUBLE_EQ(s.interior(i).mu2, q.mu2 + du[3]);
  }
}

TEST(Friction, ImplicitManningFactor) {
  Parameters p = default_params();
  p.manning_n = 0.022;
  const Grid grid(0, 1, 4);
  std::vector<CellState> cells(4, cell(0.5, 0.0, 0.01, 1.0, -1.0, p));
  cells[1] = cell(0.5, 0.0, 0.01, 0.0, -1.0, p);
  SimState s = make_state(grid, cells);
  apply_friction(s, grid, 1e-3, p);
  // 1 / (1 + dt g n^2 |u| / h^(4/3)) evaluated in 40-digit arithmetic
  EXPECT_NEAR(s.interior(0).mu2 / cells[0].mu2, 0.99780323797224046, 1e-14);
  EXPECT_EQ(s.interior(1).mu2, 0.0);
  EXPECT_EQ(s.interior(0).mu1, cells[0].mu1);

  p.manning_n = 0.0;
  SimState t = make_state(grid, cells);
  apply_friction(t, grid, 1e-3, p);
  EXPECT_EQ(t.interior(0).mu2, cells[0].mu2);
}

TEST(Friction, DryBottomActsOnTopLayer) {
  Parameters p = default_params();
  p.manning_n = 0.022;
  const Grid grid(0, 1, 4);
  std::vector<CellState> cells(4, cell(0.01, 1.0, 0.0, 0.0, -0.2, p));
  SimState s = make_state(grid, cells);
  apply_friction(s, grid, 1e-3, p);
  EXPECT_NEAR(s.interior(0).mu1 / cells[0].mu1, 0.99780323797224046, 1e-14);
}

TEST(PositivityGuard, ClipsZeroesAndRejects) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 4);
  std::vector<CellState> cells(4, cell(0.5, 0.0, 0.4, 0.0, -1.0, p));
  cells[0].m2 = -1e-15 * p.rho2();
  cells[0].mu2 = 1e-16;
  cells[1].m2 = 1e-4 * p.rho2();
  cells[1].mu2 = 1e-2 * p.rho2();
  SimState s = make_state(grid, cells);
  const auto clipped = positivity_guard(s, grid, p);
  EXPECT_EQ(s.interior(0).m2, 0.0);
  EXPECT_EQ(s.interior(0).mu2, 0.0);
  EXPECT_EQ(s.interior(1).mu2, 0.0);
  EXPECT_DOUBLE_EQ(clipped[1], 1e-15 * p.rho2() * grid.dx());

  cells[2].m2 = -0.1 * p.rho2();
  SimState bad = make_state(grid, cells);
  try {
    positivity_guard(bad, grid, p);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverErrorKind::NegativeDepth);
  }
}

TEST(DriverProperty, LakeAtRestPersists) {
  for (EigenMethod m : {EigenMethod::VelocityDifference, EigenMethod::LinearizedDynamic,
                        EigenMethod::Direct}) {
    for (auto bathy : {bumpy, stepped}) {
      for (double eta2 : {-0.6, -0.1}) {
        Parameters p = default_params();
        p.eigen_method = m;
        const Grid grid(0, 1, 50);
        SimState s = at_rest_lake(grid, p, eta2, bathy);
        const SimState initial = s;
        advance_to(s, 1.0, p, grid, {BoundaryKind::Wall, BoundaryKind::Wall}, StepOptions{});
        for (int i = 0; i < grid.n_cells; ++i) {
          ASSERT_NEAR(s.interior(i).m1, initial.interior(i).m1, 1e-9);
          ASSERT_NEAR(s.interior(i).m2, initial.interior(i).m2, 1e-9);
          ASSERT_NEAR(s.interior(i).mu1, 0.0, 1e-9);
          ASSERT_NEAR(s.interior(i).mu2, 0.0, 1e-9);
        }
      }
    }
  }
}

TEST(DriverProperty, FlatQuiescentUnchangedExactly) {
  const Parameters p = default_params();
  const Grid grid(0, 1, 40);
  std::vector<CellState> cells(40, cell(0.6, 0, 0.4, 0, -1.0, p));
  SimState s = make_state(grid, cells);
  advance_to(s, 0.5, p, grid, {BoundaryKind::Wall, BoundaryKind::Extrapolation}, StepOptions{});
  for (int i = 0; i < grid.n_cells; ++i) ASSERT_EQ(s.interior(i), cells[i]);
}

TEST(DriverProperty, WallBoundedMassConservedAndCflBounded) {
  for (Limiter lim : {Limiter::Minmod, Limiter::MC}) {
    const Parameters p = default_params();
    const Grid grid(0, 1, 100);
    std::vector<CellState> cells;
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      const double bump = 0.1 * std::exp(-100 * (x - 0.3) * (x - 0.3));
      cells.push_back(cell(0.6 - bump, 0.0, 0.4 + bump, 0.0, stepped(x), p));
    }
    for (int i = 50; i < 100; ++i) cells[i] = cell(0.2, 0, 0, 0, -0.2, p);
    SimState s = make_state(grid, cells);
    const auto m0 = total_mass(s, grid);
    StepOptions opt;
    opt.limiter = lim;
    advance_to(s, 2.0, p, grid, {BoundaryKind::Wall, BoundaryKind::Wall}, opt);
    const auto m1 = total_mass(s, grid);
    EXPECT_EQ(s.diag.clipped_mass[0] + s.diag.clipped_mass[1], 0.0);
    EXPECT_NEAR(m1[0], m0[0], 1e-12 * m0[0]);
    EXPECT_NEAR(m1[1], m0[1], 1e-12 * m0[1]);
    EXPECT_LE(s.diag.max_cfl, 0.9 + 1e-12);
    for (int i = 0; i < grid.n_cells; ++i) {
      ASSERT_GE(s.interior(i).m1, 0.0);
      ASSERT_GE(s.interior(i).m2, 0.0);
    }
    // the shelf stays dry: corrections are suppressed at the wall interface
    for (int i = 51; i < 100; ++i) ASSERT_EQ(s.interior(i).m2, 0.0);
  }
}

TEST(DriverProperty, SolverErrorsCarryInterfaceDiagnostics) {
  Parameters p = default_params();
  p.eigen_method = EigenMethod::Direct;
  const Grid grid(0, 1, 10);
  std::vector<CellState> cells(10, cell(0.5, 1.5, 0.5, -0.5, -1.0, p));
  SimState s = make_state(grid, cells);
  try {
    step(s, p, grid, {BoundaryKind::Extrapolation, BoundaryKind::Extrapolation}, StepOptions{});
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), SolverErrorKind::HyperbolicityLoss);
    EXPECT_NE(std::string(e.what()).find("interface x="), std::string::npos);
  }
}
