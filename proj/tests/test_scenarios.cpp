#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace twolayer;

TEST(Scenarios, SimpleWaveSetups) {
  const ScenarioSpec w3 = build_scenario("wave3");
  EXPECT_EQ(w3.perturbation.family, 3);
  EXPECT_DOUBLE_EQ(w3.perturbation.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(w3.perturbation.x0, 0.45);
  EXPECT_DOUBLE_EQ(w3.eta1_hat, 0.0);
  EXPECT_DOUBLE_EQ(w3.eta2_hat, -0.6);
  EXPECT_DOUBLE_EQ(w3.parameters().r(), 0.95);
  EXPECT_DOUBLE_EQ(w3.bathymetry(0.2), -1.0);
  EXPECT_DOUBLE_EQ(w3.bathymetry(0.7), -0.2);
  EXPECT_EQ(w3.n, 500);
  const ScenarioSpec w4 = build_scenario("wave4");
  EXPECT_EQ(w4.perturbation.family, 4);
  EXPECT_DOUBLE_EQ(w4.perturbation.epsilon, 0.04);
  EXPECT_EQ(w4.eta2_hat, w3.eta2_hat);
}

TEST(Scenarios, ZeroEpsilonIsBackground) {
  ScenarioSpec s = build_scenario("wave3");
  s.perturbation.epsilon = 0.0;
  const auto cells = initial_condition(s);
  const Parameters p = s.parameters();
  const Grid grid = s.grid();
  for (int i = 0; i < grid.n_cells; ++i) {
    const double b = s.bathymetry(grid.center(i));
    EXPECT_EQ(cells[i].m1, p.rho1() * s.background().h1_hat(b));
    EXPECT_EQ(cells[i].m2, p.rho2() * s.background().h2_hat(b));
    EXPECT_EQ(cells[i].mu1, 0.0);
    EXPECT_EQ(cells[i].mu2, 0.0);
  }
}

TEST(Scenarios, SimpleWaveIsOneEigenvector) {
  const ScenarioSpec s = build_scenario("wave3");
  const Parameters p = s.parameters();
  const auto cells = initial_condition(s);
  const EigenBasis basis = linearized_basis(0.6, 0.4, p);
  const CellState& q = cells[0];
  EXPECT_NEAR(q.m1 / p.rho1() - 0.6, 0.1 * basis.R(0, 2), 1e-14);
  EXPECT_NEAR(q.mu1 / p.rho1(), 0.1 * basis.R(1, 2), 1e-14);
  EXPECT_NEAR(q.m2 / p.rho2() - 0.4, 0.1 * basis.R(2, 2), 1e-14);
  EXPECT_NEAR(q.mu2 / p.rho2(), 0.1 * basis.R(3, 2), 1e-14);
}

TEST(Scenarios, NamedSetups) {
  const ScenarioSpec dry = build_scenario("wb-jump-dry");
  EXPECT_EQ(dry.bathymetry.kind, BathymetryKind::Step);
  EXPECT_DOUBLE_EQ(dry.eta2_hat, -6.0);
  EXPECT_EQ(dry.background().h2_hat(dry.bathymetry(7.5)), 0.0);
  EXPECT_GT(dry.background().h2_hat(dry.bathymetry(2.5)), 0.0);
  EXPECT_DOUBLE_EQ(build_scenario("wb-jump-wet").eta2_hat, -4.0);

  const ScenarioSpec shelf = build_scenario("ocean-shelf");
  EXPECT_EQ(shelf.n, 2000);
  EXPECT_EQ(shelf.bc_left, BoundaryKind::Wall);
  EXPECT_DOUBLE_EQ(shelf.x_hi - shelf.bathymetry.x_step, 30.0e3);

  const ScenarioSpec bw = build_scenario("baroclinic-wetting");
  ASSERT_TRUE(bw.manning_n.has_value());
  EXPECT_DOUBLE_EQ(*bw.manning_n, 0.022);
  EXPECT_THROW(build_scenario("tsunami"), ConfigError);
}

TEST(ScenarioProperty, InitialConditionsValid) {
  for (const std::string& name : scenario_names()) {
    const ScenarioSpec s = build_scenario(name);
    const Parameters p = s.parameters();
    const auto cells = initial_condition(s);
    ASSERT_EQ(static_cast<int>(cells.size()), s.n);
    for (const CellState& q : cells) {
      ASSERT_GE(q.m1, 0.0) << name;
      ASSERT_GE(q.m2, 0.0) << name;
      if (q.m1 == 0.0) {
        ASSERT_EQ(q.mu1, 0.0);
      }
      if (q.m2 == 0.0) {
        ASSERT_EQ(q.mu2, 0.0);
      }
    }
    if (s.perturbation.kind != PerturbationKind::None) continue;
    // quiescent scenarios: no interface moves anything
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      const RiemannSolution sol = solve_interface(cells[i], cells[i + 1], p);
      for (const auto& z : sol.fwaves) ASSERT_LT(z.cwiseAbs().maxCoeff(), 1e-9) << name << " " << i;
    }
  }
}

TEST(ScenarioProperty, ConfigRoundTripLossless) {
  for (const std::string& name : scenario_names()) {
    ScenarioSpec s = build_scenario(name);
    s.cfl = 0.1 + 1.0 / 3.0;
    std::istringstream in(format_key_values(s));
    const ScenarioSpec back = parse_scenario(in);
    EXPECT_EQ(back, s) << name;
    EXPECT_EQ(format_key_values(back), format_key_values(s));
  }
}

TEST(Config, OverridesAndErrors) {
  std::istringstream in("scenario = wave4\n# comment\nn = 64   # trailing\neigen = direct\n");
  const ScenarioSpec s = parse_scenario(in);
  EXPECT_EQ(s.name, "wave4");
  EXPECT_EQ(s.n, 64);
  EXPECT_EQ(s.eigen, EigenMethod::Direct);

  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(parse_scenario(unknown), ConfigError);
  std::istringstream junk("n = 12x\n");
  EXPECT_THROW(parse_scenario(junk), ConfigError);
  std::istringstream noeq("n 12\n");
  EXPECT_THROW(parse_scenario(noeq), ConfigError);
  ScenarioSpec bad = build_scenario("wave3");
  bad.frames = 0;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = build_scenario("wave3");
  bad.rho1 = 1100;
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(OutputTimes, EvenlySpaced) {
  EXPECT_EQ(output_times(3.0, 1), std::vector<double>{3.0});
  EXPECT_EQ(output_times(3.0, 4), (std::vector<double>{0.0, 1.0, 2.0, 3.0}));
}

namespace {
SolutionFrame flat_frame(std::size_t n, double value) {
  SolutionFrame f;
  f.x_lo = 0.0;
  f.x_hi = 2.0;
  f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.x[i] = (i + 0.5) * 2.0 / n;
    f.b[i] = -1.0;
    f.h1[i] = 0.5;
    f.h2[i] = value;
    f.hu2[i] = 0.1 * value;
  }
  f.derive(twolayer::testing::default_params());
  return f;
}
}  // namespace

TEST(ErrorNorms, IdenticalFramesAreZero) {
  const SolutionFrame f = flat_frame(10, 0.4);
  const ErrorReport rep = error_norms(f, f, twolayer::testing::default_params());
  for (const auto& e : rep.fields) {
    EXPECT_EQ(e.l1, 0.0);
    EXPECT_EQ(e.linf, 0.0);
  }
}

TEST(ErrorNorms, ConstantOffset) {
  const SolutionFrame a = flat_frame(10, 0.4);
  SolutionFrame b = a;
  for (double& v : b.h1) v += 0.25;
  const ErrorReport rep = error_norms(b, a, twolayer::testing::default_params());
  EXPECT_NEAR(rep.get("h1").l1, 0.25 * 10 * 0.2, 1e-15);
  EXPECT_NEAR(rep.get("h1").linf, 0.25, 1e-15);
  EXPECT_EQ(rep.get("h2").l1, 0.0);
}

TEST(ErrorNorms, FineReferenceIsRestricted) {
  const Parameters p = twolayer::testing::default_params();
  const SolutionFrame coarse = flat_frame(10, 0.4);
  const SolutionFrame fine = flat_frame(30, 0.4);
  const ErrorReport rep = error_norms(coarse, fine, p);
  EXPECT_LT(rep.get("h2").linf, 1e-15);
  EXPECT_THROW(error_norms(fine, coarse, p), ConfigError);
}

TEST(Restriction, PreservesIntegral) {
  const Parameters p = twolayer::testing::default_params();
  SolutionFrame fine = flat_frame(35, 0.4);
  for (std::size_t i = 0; i < fine.size(); ++i) fine.h2[i] = 0.4 + 0.01 * i;
  fine.derive(p);
  const SolutionFrame c = restrict_frame(fine, 10, p);
  double a = 0.0, b = 0.0;
  for (double v : fine.h2) a += v * fine.dx();
  for (double v : c.h2) b += v * c.dx();
  EXPECT_NEAR(a, b, 1e-13);
}

TEST(Convergence, OrderFit) {
  std::vector<std::pair<int, double>> first, second;
  for (int k = 0; k < 5; ++k) {
    first.push_back({64 << k, 1.0 / (1 << k)});
    second.push_back({64 << k, 1.0 / (1 << (2 * k))});
  }
  EXPECT_NEAR(convergence_order(first), 1.0, 1e-12);
  EXPECT_NEAR(convergence_order(second), 2.0, 1e-12);
  EXPECT_THROW(convergence_order({{64, 1.0}, {128, 0.5}}), ConfigError);
}

TEST(FrameCsv, RoundTrip) {
  const SolutionFrame f = flat_frame(8, 0.3);
  std::stringstream ss;
  write_csv(ss, f);
  const SolutionFrame g = read_csv(ss);
  EXPECT_EQ(g.x, f.x);
  EXPECT_EQ(g.h2, f.h2);
  EXPECT_EQ(g.u2, f.u2);
  EXPECT_NEAR(g.x_lo, f.x_lo, 1e-15);
  EXPECT_NEAR(g.x_hi, f.x_hi, 1e-15);
  std::stringstream bad("x,y\n1,2\n");
  EXPECT_THROW(read_csv(bad), ConfigError);
}

TEST(RunScenario, WellBalancedJumpIsExact) {
  ScenarioSpec s = build_scenario("wb-jump-wet");
  s.t_final = 1.0;
  const RunResult r = run_scenario(s);
  const ErrorReport rep = error_norms(r.frames.back(), initial_frame(s), s.parameters());
  for (const auto& e : rep.fields) EXPECT_EQ(e.linf, 0.0) << e.field;
  EXPECT_EQ(r.frames.size(), 2u);
  EXPECT_EQ(r.frames.front().t, 0.0);
  EXPECT_EQ(r.frames.back().t, 1.0);
}
