#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "saddle_escape/sofw.hpp"
#include "saddle_escape/verification.hpp"

using namespace saddle;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

SofwConfig quad_cfg(double eps = 1e-4) {
  SofwConfig c;
  c.L_tilde = 2;
  c.rho_tilde = 2;
  c.eps_g = eps;
  c.eps_H = eps;
  return c;
}

}  // namespace

TEST(SofwConfig, FromConstantsTakesMaxima) {
  const SofwConfig c = SofwConfig::from_constants({3, 0, 5, 2}, 1e-3, 1e-3);
  EXPECT_EQ(c.L_tilde, 5);
  EXPECT_EQ(c.rho_tilde, 2);
  const SofwConfig z = SofwConfig::from_constants({0, 0, 0, 0}, 1e-3, 1e-3);
  EXPECT_GT(z.rho_tilde, 0);
}

TEST(SofwConfig, Validation) {
  SofwConfig c = quad_cfg();
  EXPECT_NO_THROW(c.validate());
  c.L_tilde = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = quad_cfg();
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(SofwStep, OneDimensionalQuadratic) {
  const Problem q = quad1d_problem();
  const SofwStep s0 = sofw_step(q.oracle, q.feasible_set, vec({0.5}), quad_cfg());
  EXPECT_EQ(s0.record.kind, StepKind::first_order);
  EXPECT_DOUBLE_EQ(s0.record.X, 1.0);
  EXPECT_EQ(s0.record.psi, 0.0);
  EXPECT_DOUBLE_EQ(s0.record.step_length, 0.5);
  EXPECT_NEAR(s0.x_next(0), 0.0, 1e-15);

  const SofwStep s1 = sofw_step(q.oracle, q.feasible_set, s0.x_next, quad_cfg(), 1);
  EXPECT_EQ(s1.record.kind, StepKind::terminate);
  EXPECT_EQ(s1.x_next, s0.x_next);
}

TEST(SofwStep, StationaryPointTerminatesInPlace) {
  const Problem q = quad1d_problem();
  const SofwStep s = sofw_step(q.oracle, q.feasible_set, vec({0}), quad_cfg());
  EXPECT_EQ(s.record.kind, StepKind::terminate);
  EXPECT_EQ(s.x_next, vec({0}));
}

TEST(SofwStep, SecondOrderStepAtTheSaddle) {
  const Problem ce = counterexample_problem();
  const SofwConfig cfg = SofwConfig::from_constants(ce.oracle.constants(), 1e-4, 0.5);
  const SofwStep s = sofw_step(ce.oracle, ce.feasible_set, vec({0, 0}), cfg);
  EXPECT_EQ(s.record.kind, StepKind::second_order);
  EXPECT_EQ(s.record.X, 0.0);
  EXPECT_NEAR(s.record.psi, (std::sqrt(5.0) - 1) / 2, 1e-12);
  EXPECT_NEAR(s.record.step_length, std::min(1.0, 2 * s.record.psi / cfg.rho_tilde), 1e-15);
  EXPECT_LT(ce.oracle.value(s.x_next), 0.0);
  EXPECT_TRUE(contains(ce.feasible_set, s.x_next, 1e-9));
}

TEST(SofwStep, RejectsInfeasiblePoint) {
  const Problem ce = counterexample_problem();
  EXPECT_THROW(sofw_step(ce.oracle, ce.feasible_set, vec({1, 1}), quad_cfg()), InfeasiblePoint);
}

TEST(RunSofw, OneDimensionalQuadraticConverges) {
  const IterationTrace t = run_sofw(quad1d_problem(), quad_cfg());
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_LE(t.steps(), 2);
  EXPECT_NEAR(t.final().x(0), 0.0, 1e-15);
  EXPECT_EQ(t.final().kind, StepKind::terminate);
}

TEST(RunSofw, StationaryStartTakesNoSteps) {
  Problem q = quad1d_problem();
  q.x0 = vec({0});
  const IterationTrace t = run_sofw(q, quad_cfg());
  EXPECT_EQ(t.steps(), 0);
  EXPECT_EQ(t.records.size(), 1u);
  EXPECT_TRUE(verify_decrease(t, quad_cfg()).empty());
}

TEST(RunSofw, EscapesTheSaddle) {
  const Problem ce = counterexample_problem();
  const SofwConfig cfg = SofwConfig::from_constants(ce.oracle.constants(), 1e-4, 1e-4);
  const IterationTrace t = run_sofw(ce, cfg);
  ASSERT_EQ(t.status, RunStatus::converged);
  const Vector xf = t.final().x;
  EXPECT_GE(xf.norm(), 0.1);
  EXPECT_LT(ce.oracle.value(xf), 0.0);
  const StationarityReport r = classify(ce.oracle, ce.feasible_set, xf, 1e-4, 1e-4);
  EXPECT_EQ(r.verdict, Verdict::sosp);
  EXPECT_TRUE(verify_decrease(t, cfg).empty());
}

TEST(RunSofw, TraceInvariants) {
  const Problem ce = counterexample_problem();
  const SofwConfig cfg = SofwConfig::from_constants(ce.oracle.constants(), 1e-4, 1e-4);
  const IterationTrace t = run_sofw(ce, cfg);
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    EXPECT_EQ(t.records[k].k, static_cast<long>(k));
    EXPECT_TRUE(contains(ce.feasible_set, t.records[k].x, 1e-9));
    if (k > 0) {
      EXPECT_LE(t.records[k].f, t.records[k - 1].f);
    }
  }
}

TEST(RunSofw, IterationLimitIsReported) {
  const Problem ce = counterexample_problem();
  SofwConfig cfg = SofwConfig::from_constants(ce.oracle.constants(), 1e-9, 1e-9, 3);
  const IterationTrace t = run_sofw(ce, cfg);
  EXPECT_EQ(t.status, RunStatus::max_iters);
  EXPECT_EQ(t.steps(), 3);
  EXPECT_EQ(t.final().kind, StepKind::terminate);
}

TEST(VerifyDecrease, QuadraticDecreaseEqualsTheFirstOrderModel) {
  const IterationTrace t = run_sofw(quad1d_problem(), quad_cfg());
  EXPECT_TRUE(verify_decrease(t, quad_cfg()).empty());
  EXPECT_DOUBLE_EQ(t.records[0].f - t.records[1].f, 0.25);
  EXPECT_DOUBLE_EQ(t.records[0].X * t.records[0].X / (2 * quad_cfg().L_tilde), 0.25);
}

TEST(VerifyDecrease, HalvedLipschitzConstantIsCaught) {
  // f = 5 x^2 on [-1, 1]: L = 10, but the run uses 5.
  Matrix Q(1, 1);
  Q << 10;
  Problem p = quad1d_problem();
  p.oracle = quadratic_oracle(Q, vec({0}), 1.0);
  SofwConfig cfg = SofwConfig::from_constants(p.oracle.constants(), 1e-4, 1e-4, 50);
  cfg.L_tilde /= 2;
  const IterationTrace t = run_sofw(p, cfg);
  EXPECT_FALSE(verify_decrease(t, cfg).empty());
}

TEST(ComplexityBound, Examples) {
  SofwConfig cfg = quad_cfg(1.0);
  ComplexityBound b = complexity_bound(cfg, 0.25, 0.0);
  EXPECT_DOUBLE_EQ(b.first_order, 1.0);
  const IterationTrace t = run_sofw(quad1d_problem(), cfg);
  EXPECT_EQ(count_first_order_violations(t, 1.0), 0);
  const IterationTrace t2 = run_sofw(quad1d_problem(), quad_cfg());
  EXPECT_EQ(count_first_order_violations(t2, 1e-4), 1);

  cfg.eps_g = 1e6;
  EXPECT_LT(complexity_bound(cfg, 0.25, 0.0).first_order, 1.0);

  EXPECT_THROW(complexity_bound(quad_cfg(), 0.0, 1.0), InvalidInput);
  cfg.eps_H = 0;
  EXPECT_THROW(complexity_bound(cfg, 0.25, 0.0), InvalidInput);
}

TEST(ComplexityBound, CounterexampleRunRespectsBothBounds) {
  const Problem ce = counterexample_problem();
  const SofwRunCheck c = check_sofw_run("counterexample", ce, 1e-2, 1e-2);
  EXPECT_TRUE(c.converged);
  EXPECT_TRUE(c.joint_bound_respected());
  EXPECT_TRUE(c.first_order_bound_respected());
  EXPECT_EQ(c.decrease_violations, 0);
}

TEST(RunSofw, RandomBoxQuadraticsFallShortOnlyOnClampedSecondOrderSteps) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 40; ++i) {
    const Problem p = random_box_quadratic(rng);
    const SofwRunCheck c = check_sofw_run("q" + std::to_string(i), p, 1e-3, 1e-3);
    EXPECT_TRUE(c.converged) << c.label;
    EXPECT_TRUE(c.feasible) << c.label;
    EXPECT_TRUE(c.joint_bound_respected()) << c.label;
    EXPECT_TRUE(c.first_order_bound_respected()) << c.label;

    const SofwConfig cfg = SofwConfig::from_constants(p.oracle.constants(), 1e-3, 1e-3, 1000000);
    const IterationTrace t = run_sofw(p, cfg);
    for (long k : verify_decrease(t, cfg)) {
      const IterationRecord& r = t.records[k];
      EXPECT_EQ(r.kind, StepKind::second_order) << c.label << " k=" << k;
      EXPECT_EQ(r.step_length, 1.0) << c.label << " k=" << k;
      EXPECT_GT(r.psi, std::sqrt(3.0) / 2 * cfg.rho_tilde) << c.label << " k=" << k;
    }
  }
}

TEST(VerifyDecrease, UnitClampCannotReachTheCubicBoundOnAConcaveQuadratic) {
  // f = -|x|^2 / 2 on [-1, 1]^2 from the origin with tight constants: psi = 1 = rho~,
  // so the bound asks for 2/3 while no unit-ball step gains more than 1/2.
  Problem p = quad1d_problem();
  Matrix A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  p.feasible_set = Polytope(A, Vector::Ones(4));
  p.oracle = quadratic_oracle(-Matrix::Identity(2, 2), Vector::Zero(2), std::sqrt(2.0));
  p.x0 = Vector::Zero(2);
  p.f_min = -1.0;
  const SofwConfig cfg = SofwConfig::from_constants(p.oracle.constants(), 1e-4, 1e-4, 1);
  const IterationTrace t = run_sofw(p, cfg);
  ASSERT_GE(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].kind, StepKind::second_order);
  EXPECT_DOUBLE_EQ(t.records[0].psi, 1.0);
  EXPECT_DOUBLE_EQ(t.records[0].f - t.records[1].f, 0.5);
  EXPECT_EQ(verify_decrease(t, cfg), std::vector<long>{0});
}

TEST(RunSofw, BestMeasureFallsBelowToleranceWithinTheBound) {
  const Problem ce = counterexample_problem();
  const SofwConfig cfg = SofwConfig::from_constants(ce.oracle.constants(), 1e-3, 1e-3);
  const IterationTrace t = run_sofw(ce, cfg);
  const ComplexityBound b = complexity_bound(cfg, ce.oracle.value(ce.x0), ce.f_min);
  double best = INFINITY;
  for (const IterationRecord& r : t.records) {
    if (static_cast<double>(r.k) > b.joint) break;
    best = std::min(best, std::max(r.X, r.psi));
  }
  EXPECT_LE(best, 1e-3);
}

TEST(StepKind, Names) {
  EXPECT_EQ(to_string(StepKind::first_order), "FO");
  EXPECT_EQ(to_string(StepKind::second_order), "SO");
  EXPECT_EQ(to_string(StepKind::projected_gradient), "PG");
  EXPECT_EQ(to_string(StepKind::terminate), "terminate");
  EXPECT_EQ(to_string(RunStatus::converged), "converged");
  EXPECT_EQ(to_string(RunStatus::max_iters), "max_iters");
}
