#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "saddle_escape/oracles.hpp"

using namespace saddle;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double f_ref(double x, double y) { return -x * y * std::exp(-x * x - y * y) + 0.5 * y * y; }

}  // namespace

TEST(Counterexample, ValueMatchesClosedForm) {
  const ObjectiveOracle o = counterexample_oracle();
  EXPECT_EQ(o.dim(), 2);
  EXPECT_DOUBLE_EQ(o.value(vec({0, 0})), 0.0);
  EXPECT_NEAR(o.value(vec({0.5, -0.5})), 0.27663266492815836, 1e-15);
  EXPECT_NEAR(o.value(vec({-1.2, 0.4})), f_ref(-1.2, 0.4), 1e-15);
}

TEST(Counterexample, OriginIsAStrictSaddle) {
  const ObjectiveOracle o = counterexample_oracle();
  EXPECT_EQ(o.gradient(vec({0, 0})), Vector::Zero(2));
  Matrix H(2, 2);
  H << 0, -1, -1, 1;
  EXPECT_EQ(o.hessian(vec({0, 0})), H);
  const Vector v = vec({-1, -1});
  EXPECT_DOUBLE_EQ(v.dot(o.hessian(vec({0, 0})) * v), -1.0);
}

TEST(Counterexample, DimensionIsChecked) {
  EXPECT_THROW(counterexample_oracle().value(vec({1, 2, 3})), DimensionMismatch);
  EXPECT_THROW(counterexample_oracle().gradient(vec({1})), DimensionMismatch);
}

TEST(Counterexample, SampledValuesStayAboveLowerBound) {
  const ObjectiveOracle o = counterexample_oracle();
  double lo = INFINITY;
  for (int i = -300; i <= 300; ++i)
    for (int j = -300; j <= 300; ++j) {
      const double x = i * 0.01, y = j * 0.01;
      if (x + y > 0) continue;
      lo = std::min(lo, o.value(vec({x, y})));
    }
  EXPECT_GE(lo, -0.5);
  EXPECT_GE(lo, kCounterexampleFmin);
  EXPECT_LE(lo, kCounterexampleFmin + 0.11);
}

TEST(Counterexample, ConstantsSurviveAudit) {
  const ObjectiveOracle o = counterexample_oracle();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-3, 3);
  std::vector<Vector> pts;
  for (int i = 0; i < 4000; ++i) pts.push_back(vec({U(rng), U(rng)}));
  EXPECT_TRUE(audit_constants(o, pts).empty());
}

TEST(Quadratic, Examples) {
  Matrix Q(1, 1);
  Q << 2;
  const ObjectiveOracle o = quadratic_oracle(Q, vec({0}), 1.0);
  EXPECT_DOUBLE_EQ(o.value(vec({0.5})), 0.25);
  EXPECT_DOUBLE_EQ(o.gradient(vec({0.5}))(0), 1.0);
  EXPECT_DOUBLE_EQ(o.hessian(vec({0.5}))(0, 0), 2.0);

  const ObjectiveOracle j3 = quadratic_oracle(0.5 * Matrix::Ones(3, 3), Vector::Zero(3), 1.0);
  EXPECT_DOUBLE_EQ(j3.value(vec({1, 0, 0})), 0.25);

  Matrix Q2(2, 2);
  Q2 << 0.5, -1, -1, 0.5;
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(quadratic_oracle(Q2, Vector::Zero(2), 1.0).value(vec({s, s})), -0.25, 1e-15);
}

TEST(Quadratic, ConstantsFollowTheSpectralNorm) {
  Matrix Q(2, 2);
  Q << 1, 2, 2, -3;
  const double norm = Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().cwiseAbs().maxCoeff();
  const SmoothnessConstants k = quadratic_oracle(Q, vec({3, 4}), 2.0).constants();
  EXPECT_NEAR(k.L, norm, 1e-12);
  EXPECT_NEAR(k.H_max, norm, 1e-12);
  EXPECT_EQ(k.rho, 0.0);
  EXPECT_NEAR(k.g_max, norm * 2.0 + 5.0, 1e-12);
}

TEST(Quadratic, RejectsAsymmetricMatrix) {
  Matrix Q(2, 2);
  Q << 1, 2, 0, 1;
  EXPECT_THROW(quadratic_oracle(Q, Vector::Zero(2), 1.0), InvalidInput);
}

TEST(FiniteDifferences, CounterexampleGradient) {
  const ObjectiveOracle o = counterexample_oracle();
  EXPECT_LE(fd_check_gradient(o, vec({0.3, -0.7}), 1e-5), 1e-5);
  EXPECT_LE(fd_check_gradient(o, vec({0, 0}), 1e-5), 1e-5);
}

TEST(FiniteDifferences, CounterexampleHessian) {
  const ObjectiveOracle o = counterexample_oracle();
  EXPECT_LE(fd_check_hessian(o, vec({0, 0})), 1e-4);
  EXPECT_LE(fd_check_hessian(o, vec({0.5, -0.5})), 1e-4);
}

TEST(FiniteDifferences, QuadraticIsExactToRounding) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  Matrix A(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) A(i, j) = N(rng);
  const ObjectiveOracle o = quadratic_oracle(A + A.transpose(), vec({1, -2, 0.5}), 3.0);
  for (int t = 0; t < 20; ++t) {
    const Vector x = vec({N(rng), N(rng), N(rng)});
    EXPECT_LE(fd_check_gradient(o, x), 1e-9);
    EXPECT_LE(fd_check_hessian(o, x), 1e-8);
  }
}

TEST(FiniteDifferences, DetectsAWrongGradient) {
  const ObjectiveOracle good = counterexample_oracle();
  const ObjectiveOracle bad(
      "bad", 2, [&](const Vector& x) { return good.value(x); },
      [&](const Vector& x) { return Vector(1.01 * good.gradient(x)); }, [&](const Vector& x) { return good.hessian(x); },
      good.constants());
  EXPECT_GT(fd_check_gradient(bad, vec({0.3, -0.7})), 1e-4);
}

TEST(Audit, FlagsUnderstatedConstants) {
  const ObjectiveOracle o = counterexample_oracle().with_constants({0.1, 0.1, 0.1, 0.1});
  std::vector<Vector> pts{vec({0, 0}), vec({0.5, -0.5}), vec({-1, 0.2})};
  const auto issues = audit_constants(o, pts);
  EXPECT_FALSE(issues.empty());
}

TEST(Problems, BundledProblemsAreValid) {
  const Problem ce = counterexample_problem();
  EXPECT_NO_THROW(validate(ce));
  EXPECT_EQ(ce.x0, vec({0.5, -0.5}));
  EXPECT_EQ(ce.f_min, kCounterexampleFmin);

  const Problem q = quad1d_problem();
  EXPECT_NO_THROW(validate(q));
  EXPECT_DOUBLE_EQ(q.oracle.value(q.x0), 0.25);

  Matrix Q(2, 2);
  Q << 0.5, -1, -1, 0.5;
  const Problem cp = copositivity_problem(Q, 1.0);
  EXPECT_NO_THROW(validate(cp));
  EXPECT_EQ(cp.feasible_set.rows(), 4);
}

TEST(Problems, InfeasibleStartIsRejected) {
  Problem p = counterexample_problem();
  p.x0 = vec({1, 1});
  EXPECT_THROW(validate(p), InfeasiblePoint);
  p.x0 = vec({1});
  EXPECT_THROW(validate(p), DimensionMismatch);
}
